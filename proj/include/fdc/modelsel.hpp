#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "fdc/datagen.hpp"

namespace fdc {

struct GridAxis {
    std::string name;
    std::vector<double> values;
};

struct Grid {
    std::vector<GridAxis> axes;

    std::size_t size() const;
};

// Default h / lambda grid {2^-5, ..., 2^4}.
std::vector<double> power_of_two_grid();

// Values aligned with the grid's declared axis order.
struct GridPoint {
    std::vector<double> values;

    double at(const Grid& grid, const std::string& axis) const;
};

struct CellResult {
    GridPoint point;
    double error = 1.0;
    bool failed = false;
};

struct SelectionReport {
    std::vector<CellResult> table;
    GridPoint chosen;
    std::string mode;
    std::uint64_t seed = 0;
    int m_val = 0;  // FreshValidation only
};

// Validation contexts. FreshValidation draws one validation set from the
// generating law, shared by all grid points; KFold partitions the
// training data.
struct FreshValidation {
    SpectralSpec spec;
    int m_val = 1000;
    std::uint64_t seed = 0;
};

struct KFold {
    int k = 5;
    std::uint64_t seed = 0;
};

using SelectionMode = std::variant<FreshValidation, KFold>;

// fit on `train`, return misclassification rate on `val`
using FitEval =
    std::function<double(const GridPoint&, const Dataset& train, const Dataset& val)>;

// Exhaustive grid search. Points are visited in row-major order over the
// declared axes, and ties keep the earliest minimum, so smaller values on
// earlier axes win ties.
SelectionReport select(const FitEval& fit_eval, const Grid& grid,
                       const SelectionMode& mode, const Dataset& train);

}  // namespace fdc
