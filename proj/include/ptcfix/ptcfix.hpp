#pragma once

#include "ptcfix/money.hpp"
#include "ptcfix/keyvalue.hpp"
#include "ptcfix/applicable_figure.hpp"
#include "ptcfix/tax_year.hpp"
#include "ptcfix/scenario.hpp"
#include "ptcfix/ptc_model.hpp"
#include "ptcfix/irs_iteration.hpp"
#include "ptcfix/bisection.hpp"
#include "ptcfix/reconciliation.hpp"
#include "ptcfix/analysis.hpp"
