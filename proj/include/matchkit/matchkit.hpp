#pragma once

#include "matchkit/audit.hpp"
#include "matchkit/core.hpp"
#include "matchkit/engines.hpp"
#include "matchkit/experiments.hpp"
#include "matchkit/generator.hpp"
#include "matchkit/idua.hpp"
#include "matchkit/io.hpp"
#include "matchkit/oracle.hpp"
#include "matchkit/rng.hpp"
