#pragma once

#include "patrol/rational.hpp"
#include "patrol/instance.hpp"
#include "patrol/walk.hpp"
#include "patrol/latency.hpp"
#include "patrol/io.hpp"
#include "patrol/subroutines.hpp"
#include "patrol/approx.hpp"
#include "patrol/greedy.hpp"
#include "patrol/minmax.hpp"
#include "patrol/oracle.hpp"
#include "patrol/instances.hpp"
