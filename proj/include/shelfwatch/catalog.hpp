#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace shelfwatch {

// Keypoint position plus descriptor. All descriptors in one catalog share
// the same dimension.
struct LocalFeature {
    double x = 0.0;
    double y = 0.0;
    std::vector<double> descriptor;
};

// Per-SKU template: reference dimensions in pixels and the local features
// extracted from the product's model image.
struct ProductModel {
    std::string label;
    double width_ref = 0.0;
    double height_ref = 0.0;
    std::vector<LocalFeature> features;

    std::size_t feature_count() const { return features.size(); }
    double aspect_ref() const { return width_ref / height_ref; }
};

class Catalog {
public:
    Catalog() = default;

    void add(ProductModel model) {
        if (model.label.empty())
            throw std::invalid_argument("catalog: empty product label");
        if (model.width_ref <= 0.0 || model.height_ref <= 0.0)
            throw std::invalid_argument("catalog: non-positive reference dimensions for '" + model.label + "'");
        for (const auto& f : model.features) {
            if (descriptor_dim_ == 0)
                descriptor_dim_ = f.descriptor.size();
            else if (f.descriptor.size() != descriptor_dim_)
                throw std::invalid_argument("catalog: descriptor dimension mismatch in '" + model.label + "'");
        }
        auto [it, inserted] = products_.emplace(model.label, std::move(model));
        if (!inserted)
            throw std::invalid_argument("catalog: duplicate label '" + it->first + "'");
    }

    bool contains(const std::string& label) const { return products_.count(label) != 0; }

    const ProductModel& at(const std::string& label) const {
        auto it = products_.find(label);
        if (it == products_.end())
            throw std::out_of_range("catalog: unknown label '" + label + "'");
        return it->second;
    }

    std::size_t size() const { return products_.size(); }
    std::size_t descriptor_dim() const { return descriptor_dim_; }

    auto begin() const { return products_.begin(); }
    auto end() const { return products_.end(); }

private:
    std::map<std::string, ProductModel> products_;
    std::size_t descriptor_dim_ = 0;
};

}  // namespace shelfwatch
