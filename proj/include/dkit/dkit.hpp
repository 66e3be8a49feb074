#pragma once

// Umbrella header.

#include "dkit/descent.hpp"
#include "dkit/graded.hpp"
#include "dkit/io.hpp"
