#pragma once

#include "fkdet/archimedean.hpp"
#include "fkdet/entropy.hpp"
#include "fkdet/groupring.hpp"
#include "fkdet/heisenberg.hpp"
#include "fkdet/padic.hpp"
#include "fkdet/padic_mahler.hpp"
#include "fkdet/parse.hpp"
#include "fkdet/periodic.hpp"
#include "fkdet/unramified.hpp"
