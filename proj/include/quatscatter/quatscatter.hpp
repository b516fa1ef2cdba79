#pragma once

#include "quatscatter/quaternion.hpp"
#include "quatscatter/model.hpp"
#include "quatscatter/dense_solve.hpp"
#include "quatscatter/matcher.hpp"
#include "quatscatter/observables.hpp"
#include "quatscatter/oracle_ode.hpp"
#include "quatscatter/sweep.hpp"
