#pragma once

// Core planogram-compliance pipeline. Depends only on the C++ standard
// library plus the vendored nlohmann/json. Opt-in headers with extra link
// requirements: ingest.hpp (OpenSSL), jpeg.hpp (OpenCV imgcodecs),
// service.hpp (cpp-httplib, pulls in both).

#include "shelfwatch/align.hpp"
#include "shelfwatch/catalog.hpp"
#include "shelfwatch/change.hpp"
#include "shelfwatch/config.hpp"
#include "shelfwatch/detect.hpp"
#include "shelfwatch/detection.hpp"
#include "shelfwatch/geometry.hpp"
#include "shelfwatch/harness.hpp"
#include "shelfwatch/image.hpp"
#include "shelfwatch/match.hpp"
#include "shelfwatch/metrics.hpp"
#include "shelfwatch/planogram.hpp"
#include "shelfwatch/power.hpp"
#include "shelfwatch/providers.hpp"
#include "shelfwatch/search.hpp"
#include "shelfwatch/serial.hpp"
#include "shelfwatch/synth.hpp"
