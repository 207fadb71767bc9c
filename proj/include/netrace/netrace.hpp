#pragma once

#include "netrace/analytic.hpp"
#include "netrace/core.hpp"
#include "netrace/des.hpp"
#include "netrace/field_plan.hpp"
#include "netrace/presets.hpp"
#include "netrace/race_report.hpp"
#include "netrace/random_access.hpp"
#include "netrace/render.hpp"
#include "netrace/scenario_io.hpp"
#include "netrace/sdn_race.hpp"
#include "netrace/time.hpp"
#include "netrace/timeline.hpp"
