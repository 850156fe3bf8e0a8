#pragma once

#include "gaussdil/linalg.hpp"
#include "gaussdil/skew.hpp"
#include "gaussdil/symplectic.hpp"
