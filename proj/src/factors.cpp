#include "taskrisk/factors.hpp"

#include "taskrisk/error.hpp"
#include "taskrisk/table.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

namespace taskrisk {

namespace {

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

// Linear interpolation between order statistics (Hyndman-Fan type 7).
double sample_quantile(std::vector<double> values, double q) {
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

Vector noise_eigenvalues(Eigen::Index n, Eigen::Index p, std::uint64_t seed, int replicate) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(replicate)};
    std::mt19937_64 engine(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix x(n, p);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < p; ++j) x(i, j) = normal(engine);
    }
    x.rowwise() -= x.colwise().mean();
    const Vector inv_norm = x.colwise().norm().cwiseInverse().transpose();
    const Matrix unit = x * inv_norm.asDiagonal();
    return jacobi_eigen(unit.transpose() * unit).values;
}

void fix_column_signs(Matrix& loadings, Matrix* rotation) {
    for (Eigen::Index j = 0; j < loadings.cols(); ++j) {
        Eigen::Index arg = 0;
        for (Eigen::Index i = 1; i < loadings.rows(); ++i) {
            if (std::abs(loadings(i, j)) > std::abs(loadings(arg, j))) arg = i;
        }
        if (loadings(arg, j) < 0) {
            loadings.col(j) = -loadings.col(j);
            if (rotation) rotation->col(j) = -rotation->col(j);
        }
    }
}

std::vector<std::string> column_labels(const FactorSolution& s) {
    if (s.factor_labels.size() == s.factors()) return s.factor_labels;
    std::vector<std::string> out;
    for (std::size_t j = 0; j < s.factors(); ++j) out.push_back(fmt::format("F{}", j + 1));
    return out;
}

}  // namespace

ParallelAnalysisResult parallel_analysis(const OccupationMatrix& matrix, int replicates, double quantile,
                                         std::uint64_t seed, unsigned threads) {
    if (replicates < 1) throw ParameterError("parallel analysis needs at least one replicate");
    if (!(quantile > 0.0 && quantile < 1.0)) throw ParameterError("parallel analysis quantile must lie in (0, 1)");
    const auto n = matrix.values.rows();
    const auto p = matrix.values.cols();
    if (p < 2 || n <= p) throw ParameterError(fmt::format("parallel analysis needs n > p >= 2 (n = {}, p = {})", n, p));

    OccupationMatrix z = matrix;
    if (!z.standardized) z = standardize(z);
    const auto r = correlation(z);

    ParallelAnalysisResult out;
    out.observed_eigenvalues = to_std(jacobi_eigen(r.values).values);
    out.replicates = replicates;
    out.quantile = quantile;
    out.seed = seed;

    std::vector<Vector> eigen(static_cast<std::size_t>(replicates));
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(replicates));
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (int rep = static_cast<int>(t); rep < replicates; rep += static_cast<int>(threads)) {
                    eigen[static_cast<std::size_t>(rep)] = noise_eigenvalues(n, p, seed, rep);
                }
            });
        }
    }

    std::vector<double> column(static_cast<std::size_t>(replicates));
    for (Eigen::Index rank = 0; rank < p; ++rank) {
        for (int rep = 0; rep < replicates; ++rep) column[static_cast<std::size_t>(rep)] = eigen[static_cast<std::size_t>(rep)](rank);
        out.reference_eigenvalues.push_back(sample_quantile(column, quantile));
    }
    for (Eigen::Index rank = 0; rank < p; ++rank) {
        if (out.observed_eigenvalues[static_cast<std::size_t>(rank)] > out.reference_eigenvalues[static_cast<std::size_t>(rank)]) {
            ++out.suggested_factors;
        }
    }
    return out;
}

FactorSolution extract_paf(const CorrelationMatrix& r, std::size_t m, double tol, int max_iter) {
    const auto p = r.values.rows();
    if (m < 1 || static_cast<Eigen::Index>(m) >= p) {
        throw ParameterError(fmt::format("factor count must satisfy 1 <= m < p (m = {}, p = {})", m, p));
    }
    if (!(tol > 0) || max_iter < 1) throw ParameterError("PAF tolerance and iteration limit must be positive");
    const auto mi = static_cast<Eigen::Index>(m);

    const Matrix inv = checked_inverse(r.values);
    Vector h = (Vector::Ones(p) - inv.diagonal().cwiseInverse()).cwiseMax(0.0);

    FactorSolution out;
    out.attribute_ids = r.ids;
    bool heywood = false;
    double delta = std::numeric_limits<double>::infinity();
    for (int iter = 1; iter <= max_iter; ++iter) {
        Matrix reduced = r.values;
        reduced.diagonal() = h;
        const auto eig = jacobi_eigen(reduced);
        out.eigenvalues = eig.values.head(mi);
        out.loadings = eig.vectors.leftCols(mi) * eig.values.head(mi).cwiseMax(0.0).cwiseSqrt().asDiagonal();
        Vector next = out.loadings.rowwise().squaredNorm();
        if ((next.array() > 1.0).any()) {
            heywood = true;
            next = next.cwiseMin(1.0);
        }
        delta = (next - h).cwiseAbs().maxCoeff();
        h = next;
        out.iterations = iter;
        if (delta < tol) break;
    }
    if (!(delta < tol)) throw ConvergenceError("principal axis factoring", delta);

    for (Eigen::Index i = 0; i < p; ++i) {
        const double norm = out.loadings.row(i).norm();
        if (norm > 1.0) {
            heywood = true;
            out.loadings.row(i) /= norm;
        }
    }
    if (heywood) {
        out.warnings.push_back("Heywood case: communality exceeded 1 and was clamped");
    }
    fix_column_signs(out.loadings, nullptr);
    out.communalities = out.loadings.rowwise().squaredNorm();
    out.rotation = Matrix::Identity(mi, mi);
    return out;
}

double varimax_criterion(const Matrix& loadings) {
    const double p = static_cast<double>(loadings.rows());
    const Matrix sq = loadings.cwiseAbs2();
    double v = 0.0;
    for (Eigen::Index j = 0; j < sq.cols(); ++j) {
        const double s2 = sq.col(j).sum();
        v += (p * sq.col(j).squaredNorm() - s2 * s2) / (p * p);
    }
    return v;
}

VarimaxResult varimax(const Matrix& loadings, double tol, int max_iter, bool kaiser_normalize) {
    const auto p = loadings.rows();
    const auto m = loadings.cols();
    if (m < 1) throw ParameterError("varimax needs at least one factor");

    Vector row_norm = Vector::Ones(p);
    Matrix x = loadings;
    if (kaiser_normalize) {
        row_norm = loadings.rowwise().norm();
        for (Eigen::Index i = 0; i < p; ++i) {
            if (row_norm(i) > 0) x.row(i) /= row_norm(i);
            else row_norm(i) = 1.0;
        }
    }

    VarimaxResult out;
    out.rotation = Matrix::Identity(m, m);
    out.criterion_history.push_back(varimax_criterion(x));
    const double pd = static_cast<double>(p);
    bool converged = m == 1;
    double largest = 0.0;
    while (!converged) {
        if (out.sweeps == max_iter) throw ConvergenceError("varimax", largest);
        ++out.sweeps;
        largest = 0.0;
        const Matrix x_before = x;
        const Matrix rot_before = out.rotation;
        for (Eigen::Index j = 0; j < m - 1; ++j) {
            for (Eigen::Index k = j + 1; k < m; ++k) {
                double a = 0, b = 0, c = 0, d = 0;
                for (Eigen::Index i = 0; i < p; ++i) {
                    const double u = x(i, j) * x(i, j) - x(i, k) * x(i, k);
                    const double v = 2.0 * x(i, j) * x(i, k);
                    a += u;
                    b += v;
                    c += u * u - v * v;
                    d += 2.0 * u * v;
                }
                const double num = d - 2.0 * a * b / pd;
                const double den = c - (a * a - b * b) / pd;
                const double phi = 0.25 * std::atan2(num, den);
                largest = std::max(largest, std::abs(phi));
                if (phi == 0.0) continue;
                const double cs = std::cos(phi);
                const double sn = std::sin(phi);
                auto turn = [&](Matrix& target) {
                    const Vector cj = target.col(j);
                    target.col(j) = cs * cj + sn * target.col(k);
                    target.col(k) = -sn * cj + cs * target.col(k);
                };
                turn(x);
                turn(out.rotation);
            }
        }
        const double v = varimax_criterion(x);
        if (v < out.criterion_history.back()) {
            // each pair step is an exact 2-D maximiser, so a drop is rounding at the optimum
            x = x_before;
            out.rotation = rot_before;
            break;
        }
        out.criterion_history.push_back(v);
        converged = largest < tol;
    }
    out.loadings = row_norm.asDiagonal() * x;
    return out;
}

FactorSolution rotate_varimax(const FactorSolution& solution, double tol, int max_iter, bool kaiser_normalize) {
    const auto vm = varimax(solution.loadings, tol, max_iter, kaiser_normalize);
    const auto m = vm.loadings.cols();

    std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    const Vector ss = vm.loadings.colwise().squaredNorm();
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return ss(a) > ss(b); });

    FactorSolution out = solution;
    Matrix turn(solution.rotation.rows(), m);
    for (Eigen::Index j = 0; j < m; ++j) {
        out.loadings.col(j) = vm.loadings.col(order[static_cast<std::size_t>(j)]);
        turn.col(j) = vm.rotation.col(order[static_cast<std::size_t>(j)]);
    }
    fix_column_signs(out.loadings, &turn);
    out.rotation = solution.rotation * turn;
    out.communalities = out.loadings.rowwise().squaredNorm();
    out.scores.resize(0, 0);
    return out;
}

FitIndices fit_indices(const CorrelationMatrix& r, const FactorSolution& solution, std::size_t n) {
    const auto p = r.values.rows();
    const auto m = static_cast<long>(solution.loadings.cols());
    const Matrix common = solution.loadings * solution.loadings.transpose();

    FitIndices fit;
    const Matrix residual = r.values - common;
    double ss = 0.0;
    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = 0; j < p; ++j) {
            if (i != j) ss += residual(i, j) * residual(i, j);
        }
    }
    fit.rmsr = std::sqrt(ss / static_cast<double>(p * (p - 1)));

    // Uniquenesses are floored so that clamped Heywood rows keep the implied matrix invertible.
    Matrix implied = common;
    implied.diagonal() += (Vector::Ones(p) - solution.communalities).cwiseMax(1e-6);
    const double log_det_r = log_determinant(r.values);
    const Matrix implied_inv = checked_inverse(implied, 1e-6);
    const double discrepancy = std::max(
        0.0, log_determinant(implied) - log_det_r + (r.values * implied_inv).trace() - static_cast<double>(p));

    const double nd = static_cast<double>(n);
    fit.chi_square = (nd - 1.0) * discrepancy;
    fit.df = ((p - m) * (p - m) - (p + m)) / 2;
    fit.baseline_chi_square = std::max(0.0, -(nd - 1.0) * log_det_r);
    fit.baseline_df = static_cast<long>(p * (p - 1) / 2);
    fit.bic = fit.chi_square - static_cast<double>(fit.df) * std::log(nd);
    if (fit.df > 0) {
        const double df = static_cast<double>(fit.df);
        fit.rmsea = std::sqrt(std::max(fit.chi_square - df, 0.0) / (df * (nd - 1.0)));
        const double base_ratio = fit.baseline_chi_square / static_cast<double>(fit.baseline_df);
        if (base_ratio != 1.0) fit.tli = (base_ratio - fit.chi_square / df) / (base_ratio - 1.0);
    }
    return fit;
}

Matrix factor_scores(const OccupationMatrix& matrix, const CorrelationMatrix& r, const FactorSolution& solution) {
    if (!matrix.standardized) throw ParameterError("factor scores need a standardized matrix");
    if (matrix.attribute_ids != r.ids || r.ids != solution.attribute_ids) {
        throw ParameterError("matrix, correlation and loadings disagree on attribute order");
    }
    return matrix.values * checked_inverse(r.values) * solution.loadings;
}

std::vector<std::string> default_factor_labels(std::size_t m) {
    std::vector<std::string> labels{"Problem-solving", "Negotiation", "Hazard", "Empathy", "Artistic", "Coordination"};
    labels.resize(std::min(labels.size(), m));
    while (labels.size() < m) labels.push_back(fmt::format("unnamed-{}", labels.size() + 1));
    return labels;
}

void write_scree_table(std::ostream& out, const ParallelAnalysisResult& pa) {
    TableWriter w(out);
    w.row({"rank", "observed", "reference"});
    for (std::size_t i = 0; i < pa.observed_eigenvalues.size(); ++i) {
        w.row({std::to_string(i + 1), format_number(pa.observed_eigenvalues[i]), format_number(pa.reference_eigenvalues[i])});
    }
}

void write_loadings_table(std::ostream& out, const FactorSolution& solution) {
    TableWriter w(out);
    std::vector<std::string> fields{"attribute_id"};
    const auto labels = column_labels(solution);
    fields.insert(fields.end(), labels.begin(), labels.end());
    fields.push_back("communality");
    w.row(fields);
    for (Eigen::Index i = 0; i < solution.loadings.rows(); ++i) {
        fields.assign(1, solution.attribute_ids[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < solution.loadings.cols(); ++j) fields.push_back(format_number(solution.loadings(i, j)));
        fields.push_back(format_number(solution.communalities(i)));
        w.row(fields);
    }
}

void write_scores_table(std::ostream& out, const std::vector<std::string>& occupation_ids, const FactorSolution& solution) {
    TableWriter w(out);
    std::vector<std::string> fields{"soc_code"};
    const auto labels = column_labels(solution);
    fields.insert(fields.end(), labels.begin(), labels.end());
    w.row(fields);
    for (Eigen::Index i = 0; i < solution.scores.rows(); ++i) {
        fields.assign(1, occupation_ids[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < solution.scores.cols(); ++j) fields.push_back(format_number(solution.scores(i, j)));
        w.row(fields);
    }
}

void write_factor_summary(std::ostream& out, const FactorSolution& solution, const ParallelAnalysisResult* pa) {
    auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string("undefined"); };
    if (pa) {
        out << "parallel_analysis_suggested = " << pa->suggested_factors << '\n';
        out << "parallel_analysis_replicates = " << pa->replicates << '\n';
        out << "parallel_analysis_quantile = " << format_number(pa->quantile) << '\n';
        out << "parallel_analysis_seed = " << pa->seed << '\n';
    }
    out << "factors = " << solution.factors() << '\n';
    out << "paf_iterations = " << solution.iterations << '\n';
    const auto labels = column_labels(solution);
    for (std::size_t j = 0; j < labels.size(); ++j) {
        out << "factor[" << j + 1 << "] = " << labels[j] << '\n';
    }
    out << "chi_square = " << format_number(solution.fit.chi_square) << '\n';
    out << "df = " << solution.fit.df << '\n';
    out << "tli = " << opt(solution.fit.tli) << '\n';
    out << "rmsr = " << format_number(solution.fit.rmsr) << '\n';
    out << "rmsea = " << opt(solution.fit.rmsea) << '\n';
    out << "bic = " << format_number(solution.fit.bic) << '\n';
    for (const auto& w : solution.warnings) out << "warning = " << w << '\n';
}

ScoreTable read_scores_table(std::istream& in) {
    const Table table = read_table(in);
    if (table.header.empty() || table.header.front() != "soc_code") {
        throw FormatError("scores table must start with a soc_code column");
    }
    ScoreTable out;
    out.factor_labels.assign(table.header.begin() + 1, table.header.end());
    out.scores.resize(static_cast<Eigen::Index>(table.rows.size()), static_cast<Eigen::Index>(out.factor_labels.size()));
    std::vector<RowIssue> issues;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        out.occupation_ids.push_back(row.fields[0]);
        for (std::size_t j = 1; j < row.fields.size(); ++j) {
            const auto v = parse_number(row.fields[j]);
            if (!v) issues.push_back({row.line, fmt::format("non-numeric score '{}'", row.fields[j])});
            else out.scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j - 1)) = *v;
        }
    }
    if (!issues.empty()) throw ValidationError(std::move(issues));
    return out;
}

}  // namespace taskrisk
