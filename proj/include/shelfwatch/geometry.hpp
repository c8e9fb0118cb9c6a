#pragma once

#include <algorithm>
#include <cmath>

namespace shelfwatch {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline bool operator==(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }

// Axis-aligned box, corners in pixel coordinates, tl <= br componentwise.
struct Box {
    Point tl;
    Point br;

    double width() const { return br.x - tl.x; }
    double height() const { return br.y - tl.y; }
    double area() const { return width() * height(); }
    Point center() const { return {(tl.x + br.x) * 0.5, (tl.y + br.y) * 0.5}; }

    bool contains(const Point& p) const {
        return tl.x <= p.x && p.x <= br.x && tl.y <= p.y && p.y <= br.y;
    }

    static Box from_center(Point c, double w, double h) {
        return {{c.x - w * 0.5, c.y - h * 0.5}, {c.x + w * 0.5, c.y + h * 0.5}};
    }
};

inline bool operator==(const Box& a, const Box& b) { return a.tl == b.tl && a.br == b.br; }

// Horizontal pixel interval, begin <= end.
struct Span {
    double begin = 0.0;
    double end = 0.0;

    double length() const { return end - begin; }
    bool contains(double x) const { return begin <= x && x <= end; }
};

inline bool operator==(const Span& a, const Span& b) { return a.begin == b.begin && a.end == b.end; }

// Intersection over union. Degenerate (zero-area) inputs give 0.
inline double iou(const Box& a, const Box& b) {
    const double ix = std::min(a.br.x, b.br.x) - std::max(a.tl.x, b.tl.x);
    const double iy = std::min(a.br.y, b.br.y) - std::max(a.tl.y, b.tl.y);
    if (ix <= 0.0 || iy <= 0.0) return 0.0;
    const double inter = ix * iy;
    const double uni = a.area() + b.area() - inter;
    if (uni <= 0.0) return 0.0;
    return inter / uni;
}

}  // namespace shelfwatch
