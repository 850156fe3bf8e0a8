#pragma once

#include "gaussdil/matcore.hpp"
#include "gaussdil/channel.hpp"
#include "gaussdil/dilation.hpp"
#include "gaussdil/purify.hpp"
#include "gaussdil/random.hpp"
