#include "fdc/modelsel.hpp"

#include <cmath>

#include "fdc/errors.hpp"
#include "fdc/rng.hpp"

namespace fdc {

namespace {

GridPoint point_at(const Grid& grid, std::size_t flat) {
    GridPoint p;
    p.values.resize(grid.axes.size());
    // row-major: last axis varies fastest
    for (std::size_t a = grid.axes.size(); a-- > 0;) {
        const auto& values = grid.axes[a].values;
        p.values[a] = values[flat % values.size()];
        flat /= values.size();
    }
    return p;
}

std::vector<Dataset> make_folds(const Dataset& train, int k, std::uint64_t seed) {
    const int n = static_cast<int>(train.items.size());
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    Rng rng(Rng::derive(seed, 0xf01d));
    for (int i = n - 1; i > 0; --i)
        std::swap(order[i], order[rng.next_below(static_cast<std::uint64_t>(i) + 1)]);

    std::vector<Dataset> folds(k);
    for (int i = 0; i < n; ++i) {
        Dataset& fold = folds[i % k];
        const FuncObs& obs = train.items[order[i]];
        fold.items.push_back(obs);
        if (obs.label) (*obs.label == 1 ? fold.n_plus : fold.n_minus) += 1;
    }
    return folds;
}

}  // namespace

std::size_t Grid::size() const {
    std::size_t s = 1;
    for (const auto& axis : axes) s *= axis.values.size();
    return s;
}

std::vector<double> power_of_two_grid() {
    std::vector<double> g;
    for (int e = -5; e <= 4; ++e) g.push_back(std::pow(2.0, e));
    return g;
}

double GridPoint::at(const Grid& grid, const std::string& axis) const {
    for (std::size_t a = 0; a < grid.axes.size(); ++a)
        if (grid.axes[a].name == axis) return values[a];
    throw InvalidParameter("unknown grid axis: " + axis);
}

SelectionReport select(const FitEval& fit_eval, const Grid& grid,
                       const SelectionMode& mode, const Dataset& train) {
    if (grid.axes.empty()) throw InvalidParameter("grid must have at least one axis");
    for (const auto& axis : grid.axes)
        if (axis.values.empty()) throw InvalidParameter("empty grid axis: " + axis.name);

    SelectionReport report;

    std::vector<Dataset> folds;
    Dataset fresh_val;
    if (const auto* fv = std::get_if<FreshValidation>(&mode)) {
        if (fv->m_val < 1) throw InvalidParameter("m_val must be >= 1");
        report.mode = "fresh_validation";
        report.seed = fv->seed;
        report.m_val = fv->m_val;
        // one shared validation draw for every grid point
        fresh_val = sample_balanced(fv->spec, (fv->m_val + 1) / 2,
                                    Rng::derive(fv->seed, 0x5e1ec7));
    } else {
        const auto& kf = std::get<KFold>(mode);
        const int n = static_cast<int>(train.items.size());
        if (kf.k < 2 || kf.k > n) throw InvalidParameter("k must be in [2, n]");
        report.mode = "kfold";
        report.seed = kf.seed;
        folds = make_folds(train, kf.k, kf.seed);
    }

    const std::size_t total = grid.size();
    report.table.reserve(total);
    std::size_t best = 0;
    for (std::size_t flat = 0; flat < total; ++flat) {
        CellResult cell;
        cell.point = point_at(grid, flat);
        try {
            if (std::holds_alternative<FreshValidation>(mode)) {
                cell.error = fit_eval(cell.point, train, fresh_val);
            } else {
                double sum = 0.0;
                for (std::size_t f = 0; f < folds.size(); ++f) {
                    Dataset sub;
                    for (std::size_t g = 0; g < folds.size(); ++g) {
                        if (g == f) continue;
                        for (const auto& obs : folds[g].items) {
                            sub.items.push_back(obs);
                            if (obs.label)
                                (*obs.label == 1 ? sub.n_plus : sub.n_minus) += 1;
                        }
                    }
                    sum += fit_eval(cell.point, sub, folds[f]);
                }
                cell.error = sum / folds.size();
            }
        } catch (const std::exception&) {
            cell.error = 1.0;
            cell.failed = true;
        }
        report.table.push_back(cell);
        if (cell.error < report.table[best].error) best = flat;
    }
    report.chosen = report.table[best].point;
    return report;
}

}  // namespace fdc
