#pragma once

#include "m3s/analysis.hpp"
#include "m3s/count.hpp"
#include "m3s/decide.hpp"
#include "m3s/dot.hpp"
#include "m3s/endspace.hpp"
#include "m3s/error.hpp"
#include "m3s/exhaust.hpp"
#include "m3s/presentation.hpp"
#include "m3s/realize.hpp"
#include "m3s/textio.hpp"
#include "m3s/treeify.hpp"
