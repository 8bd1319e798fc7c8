#pragma once

#include "narratables/algebra.hpp"
#include "narratables/clusterkit.hpp"
#include "narratables/demo.hpp"
#include "narratables/geometry.hpp"
#include "narratables/narrative.hpp"
#include "narratables/quantum.hpp"
