#pragma once

#include "scalex/error.hpp"
#include "scalex/spectral_set.hpp"
#include "scalex/kgroups.hpp"
#include "scalex/linalg.hpp"
#include "scalex/operator_lab.hpp"
#include "scalex/wold.hpp"
#include "scalex/universal_rep.hpp"
#include "scalex/io.hpp"
