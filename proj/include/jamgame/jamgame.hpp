#pragma once

#include "jamgame/best_response.hpp"
#include "jamgame/equilibrium.hpp"
#include "jamgame/game.hpp"
#include "jamgame/oracle.hpp"
#include "jamgame/saddle.hpp"
#include "jamgame/waterfill.hpp"
