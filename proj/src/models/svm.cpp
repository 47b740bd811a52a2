#include <cmath>
#include <stdexcept>

#include "families.hpp"

namespace coval::detail {

namespace {

// Binary soft-margin SVM fitted with sequential minimal optimization. The
// classic two-loop heuristic is kept but every choice is deterministic: the
// second multiplier maximizes |E1-E2| with ties to the lowest index, and the
// fallback scans start at index 0 instead of a random position, so identical
// inputs always produce identical multipliers.
class BinarySmo {
public:
    BinarySmo(const std::vector<int32_t>& points, size_t n, size_t k,
              const std::vector<int8_t>& y, double c, double tol, double gamma)
        : points_(points), n_(n), k_(k), y_(y), c_(c), tol_(tol), gamma_(gamma) {
        alpha_.assign(n_, 0.0);
        errors_.resize(n_);
        for (size_t i = 0; i < n_; ++i) errors_[i] = -static_cast<double>(y_[i]);
        if (n_ <= kGramLimit) {
            gram_.assign(n_ * n_, 0.0);
            for (size_t i = 0; i < n_; ++i) {
                for (size_t j = i; j < n_; ++j) {
                    const double kij = kernel_rows(i, j);
                    gram_[i * n_ + j] = kij;
                    gram_[j * n_ + i] = kij;
                }
            }
        }
        solve();
    }

    /// Decision value u(x) = sum_i alpha_i y_i K(x_i, x) - b.
    double decision(std::span<const int32_t> row) const {
        double u = -b_;
        for (size_t i = 0; i < n_; ++i) {
            if (alpha_[i] <= 0.0) continue;
            u += alpha_[i] * static_cast<double>(y_[i]) * kernel_row_external(i, row);
        }
        return u;
    }

private:
    static constexpr size_t kGramLimit = 4096;

    int shared_count(const int32_t* a, const int32_t* b) const {
        int shared = 0;
        for (size_t f = 0; f < k_; ++f) {
            if (a[f] == b[f]) ++shared;
        }
        return shared;
    }

    // One-hot RBF kernel from categorical rows: ||x-z||^2 = 2(k - shared).
    double kernel_rows(size_t i, size_t j) const {
        const int shared = shared_count(points_.data() + i * k_, points_.data() + j * k_);
        return std::exp(-2.0 * gamma_ * static_cast<double>(static_cast<int>(k_) - shared));
    }

    double kernel_row_external(size_t i, std::span<const int32_t> row) const {
        const int shared = shared_count(points_.data() + i * k_, row.data());
        return std::exp(-2.0 * gamma_ * static_cast<double>(static_cast<int>(k_) - shared));
    }

    double kern(size_t i, size_t j) const {
        if (!gram_.empty()) return gram_[i * n_ + j];
        return kernel_rows(i, j);
    }

    bool take_step(size_t i1, size_t i2) {
        if (i1 == i2) return false;
        const double alph1 = alpha_[i1];
        const double alph2 = alpha_[i2];
        const double y1 = y_[i1];
        const double y2 = y_[i2];
        const double e1 = errors_[i1];
        const double e2 = errors_[i2];
        const double s = y1 * y2;

        double lo, hi;
        if (y1 != y2) {
            lo = std::max(0.0, alph2 - alph1);
            hi = std::min(c_, c_ + alph2 - alph1);
        } else {
            lo = std::max(0.0, alph1 + alph2 - c_);
            hi = std::min(c_, alph1 + alph2);
        }
        if (lo >= hi) return false;

        const double k11 = kern(i1, i1);
        const double k12 = kern(i1, i2);
        const double k22 = kern(i2, i2);
        const double eta = k11 + k22 - 2.0 * k12;
        double a2;
        if (eta > 0.0) {
            a2 = alph2 + y2 * (e1 - e2) / eta;
            a2 = std::clamp(a2, lo, hi);
        } else {
            // Degenerate curvature (duplicate rows): evaluate the objective at
            // both clip bounds and move to the better end.
            const double f1 = y1 * (e1 + b_) - alph1 * k11 - s * alph2 * k12;
            const double f2 = y2 * (e2 + b_) - s * alph1 * k12 - alph2 * k22;
            const double l1 = alph1 + s * (alph2 - lo);
            const double h1 = alph1 + s * (alph2 - hi);
            const double obj_lo = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 + 0.5 * lo * lo * k22 +
                                  s * lo * l1 * k12;
            const double obj_hi = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 + 0.5 * hi * hi * k22 +
                                  s * hi * h1 * k12;
            if (obj_lo < obj_hi - 1e-12) {
                a2 = lo;
            } else if (obj_lo > obj_hi + 1e-12) {
                a2 = hi;
            } else {
                return false;
            }
        }
        if (std::abs(a2 - alph2) < 1e-8 * (a2 + alph2 + 1e-8)) return false;

        double a1 = alph1 + s * (alph2 - a2);
        if (a1 < 0.0) {
            a2 += s * a1;
            a1 = 0.0;
        } else if (a1 > c_) {
            a2 += s * (a1 - c_);
            a1 = c_;
        }

        const double b_old = b_;
        const double b1 = e1 + y1 * (a1 - alph1) * k11 + y2 * (a2 - alph2) * k12 + b_;
        const double b2 = e2 + y1 * (a1 - alph1) * k12 + y2 * (a2 - alph2) * k22 + b_;
        if (a1 > 0.0 && a1 < c_) {
            b_ = b1;
        } else if (a2 > 0.0 && a2 < c_) {
            b_ = b2;
        } else {
            b_ = 0.5 * (b1 + b2);
        }

        alpha_[i1] = a1;
        alpha_[i2] = a2;
        const double d1 = y1 * (a1 - alph1);
        const double d2 = y2 * (a2 - alph2);
        for (size_t j = 0; j < n_; ++j) {
            errors_[j] += d1 * kern(i1, j) + d2 * kern(i2, j) - (b_ - b_old);
        }
        return true;
    }

    bool examine(size_t i2) {
        const double y2 = y_[i2];
        const double alph2 = alpha_[i2];
        const double e2 = errors_[i2];
        const double r2 = e2 * y2;
        const bool violates =
            (r2 < -tol_ && alph2 < c_) || (r2 > tol_ && alph2 > 0.0);
        if (!violates) return false;

        size_t best = n_;
        double best_gap = -1.0;
        size_t non_bound = 0;
        for (size_t j = 0; j < n_; ++j) {
            if (alpha_[j] > 0.0 && alpha_[j] < c_) {
                ++non_bound;
                const double gap = std::abs(e2 - errors_[j]);
                if (gap > best_gap) {
                    best_gap = gap;
                    best = j;
                }
            }
        }
        if (non_bound > 1 && best < n_ && take_step(best, i2)) return true;
        for (size_t j = 0; j < n_; ++j) {
            if (alpha_[j] > 0.0 && alpha_[j] < c_ && take_step(j, i2)) return true;
        }
        for (size_t j = 0; j < n_; ++j) {
            if (take_step(j, i2)) return true;
        }
        return false;
    }

    void solve() {
        // Hard pass cap as a termination backstop; the loop all but always
        // exits on its own well before this.
        constexpr int kMaxPasses = 2000;
        bool examine_all = true;
        int changed = 0;
        for (int pass = 0; pass < kMaxPasses; ++pass) {
            changed = 0;
            if (examine_all) {
                for (size_t i = 0; i < n_; ++i) changed += examine(i) ? 1 : 0;
            } else {
                for (size_t i = 0; i < n_; ++i) {
                    if (alpha_[i] > 0.0 && alpha_[i] < c_) changed += examine(i) ? 1 : 0;
                }
            }
            if (examine_all) {
                if (changed == 0) break;
                examine_all = false;
            } else if (changed == 0) {
                examine_all = true;
            }
        }
    }

    const std::vector<int32_t>& points_;
    size_t n_;
    size_t k_;
    const std::vector<int8_t>& y_;
    double c_;
    double tol_;
    double gamma_;
    double b_ = 0.0;
    std::vector<double> alpha_;
    std::vector<double> errors_;
    std::vector<double> gram_;
};

/// One-vs-rest RBF SVM over categorical rows. gamma follows the usual
/// "scale" convention 1/(d * Var(X)) on the one-hot design matrix, which for
/// rows of exactly k ones out of d columns collapses to d / (k * (d - k)).
class SvmModel final : public FittedModel {
public:
    SvmModel(ModelSpec spec, const Dataset& dataset, std::span<const int> rows, int class_count)
        : FittedModel(std::move(spec), class_count, dataset.feature_count()) {
        const double c = param_or(this->spec(), "c", 1.0);
        const double tol = param_or(this->spec(), "tol", 1e-3);
        const size_t k = static_cast<size_t>(dataset.feature_count());
        const size_t n = rows.size();

        const OneHotLayout layout = one_hot_layout(dataset);
        const double d = static_cast<double>(layout.dim);
        const double kd = static_cast<double>(k);
        const double denom = kd * (d - kd);
        gamma_ = denom > 0.0 ? d / denom : 1.0;

        points_.reserve(n * k);
        std::vector<int> labels(n);
        for (size_t i = 0; i < n; ++i) {
            std::span<const int32_t> r = dataset.row(rows[i]);
            points_.insert(points_.end(), r.begin(), r.end());
            labels[i] = dataset.label(rows[i]);
        }

        std::vector<char> present(static_cast<size_t>(class_count), 0);
        for (int label : labels) present[static_cast<size_t>(label)] = 1;

        for (int cls = 0; cls < class_count; ++cls) {
            if (!present[static_cast<size_t>(cls)]) continue;
            std::vector<int8_t> y(n);
            for (size_t i = 0; i < n; ++i) y[i] = labels[i] == cls ? 1 : -1;
            machine_class_.push_back(cls);
            machine_labels_.push_back(std::move(y));
        }
        machines_.reserve(machine_class_.size());
        for (const std::vector<int8_t>& y : machine_labels_) {
            machines_.emplace_back(points_, n, k, y, c, tol, gamma_);
        }
    }

    bool supports_proba() const override { return false; }

private:
    std::vector<double> proba_impl(std::span<const int32_t>) const override {
        throw std::logic_error("svm_rbf provides no probability estimates");
    }

    int predict_impl(std::span<const int32_t> row) const override {
        int best_class = machine_class_.front();
        double best_value = machines_.front().decision(row);
        for (size_t m = 1; m < machines_.size(); ++m) {
            const double value = machines_[m].decision(row);
            if (value > best_value) {
                best_value = value;
                best_class = machine_class_[m];
            }
        }
        return best_class;
    }

    double gamma_ = 1.0;
    std::vector<int32_t> points_;
    std::vector<int> machine_class_;
    std::vector<std::vector<int8_t>> machine_labels_;
    std::vector<BinarySmo> machines_;
};

} // namespace

std::unique_ptr<FittedModel> train_svm_rbf(const ModelSpec& spec, const Dataset& dataset,
                                           std::span<const int> rows, int class_count) {
    return std::make_unique<SvmModel>(spec, dataset, rows, class_count);
}

} // namespace coval::detail
