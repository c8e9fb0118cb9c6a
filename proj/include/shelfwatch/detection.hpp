#pragma once

#include <string>

#include "shelfwatch/geometry.hpp"

namespace shelfwatch {

// Raw detector output: confidence score plus center-format spatial
// dimensions, all in detector-input or rack pixels depending on stage.
struct CandidateBox {
    double confidence = 0.0;
    double center_x = 0.0;
    double center_y = 0.0;
    double width = 0.0;
    double height = 0.0;

    Point top_left() const { return {center_x - width * 0.5, center_y - height * 0.5}; }
    Point bottom_right() const { return {center_x + width * 0.5, center_y + height * 0.5}; }
    Box box() const { return {top_left(), bottom_right()}; }
    double aspect() const { return width / height; }
};

// Filtered, labeled, feature-weighted detection in rack pixels.
struct Detection {
    std::string label;
    Box box;
    double weight = 0.0;

    Point center() const { return box.center(); }
};

}  // namespace shelfwatch
