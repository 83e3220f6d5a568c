#pragma once

#include "etaq/analytics.hpp"
#include "etaq/core.hpp"
#include "etaq/expr.hpp"
#include "etaq/family.hpp"
#include "etaq/matrix.hpp"
#include "etaq/order_matrix.hpp"
#include "etaq/qseries.hpp"
#include "etaq/simplicity.hpp"
