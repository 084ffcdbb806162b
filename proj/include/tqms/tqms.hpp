#pragma once

#include "tqms/errors.hpp"
#include "tqms/linalg.hpp"
#include "tqms/group.hpp"
#include "tqms/classical.hpp"
#include "tqms/representation.hpp"
#include "tqms/semigroup.hpp"
#include "tqms/fixed_point.hpp"
#include "tqms/entropic.hpp"
#include "tqms/capacities.hpp"
