#pragma once

#include "chaostk/detect.hpp"
#include "chaostk/dynsys.hpp"
#include "chaostk/embedding.hpp"
#include "chaostk/kde.hpp"
#include "chaostk/noise.hpp"
#include "chaostk/persistence.hpp"
#include "chaostk/spectral.hpp"
#include "chaostk/sweep.hpp"
#include "chaostk/time_series.hpp"
#include "chaostk/zero_one.hpp"
