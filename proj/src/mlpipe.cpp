#include "meso/mlpipe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "meso/util.hpp"

namespace meso::mlpipe {

std::string method_name(Method m) { return m == Method::em ? "EM" : "KMeans"; }

features::FeatureTable standardize(const features::FeatureTable& table,
                                   StandardizeReport* report) {
    const auto rows = table.values.rows();
    if (rows < 2) throw std::runtime_error("standardize requires at least two rows");
    features::FeatureTable out;
    out.row_ids = table.row_ids;
    out.authors = table.authors;

    std::vector<Eigen::Index> kept;
    std::vector<double> means, stds;
    for (Eigen::Index c = 0; c < table.values.cols(); ++c) {
        double sum = 0.0;
        long long cnt = 0;
        for (Eigen::Index r = 0; r < rows; ++r) {
            const double v = table.values(r, c);
            if (!std::isnan(v)) { sum += v; ++cnt; }
        }
        if (cnt == 0) {
            if (report) report->dropped_columns.push_back(table.col_ids[c]);
            continue;
        }
        const double mean = sum / cnt;
        if (report && cnt < rows) report->imputed_columns.push_back(table.col_ids[c]);
        double var = 0.0;
        for (Eigen::Index r = 0; r < rows; ++r) {
            const double v = table.values(r, c);
            const double x = std::isnan(v) ? mean : v;
            var += (x - mean) * (x - mean);
        }
        var /= static_cast<double>(rows);
        const double sd = std::sqrt(var);
        if (sd < 1e-12) {
            if (report) report->dropped_columns.push_back(table.col_ids[c]);
            continue;
        }
        kept.push_back(c);
        means.push_back(mean);
        stds.push_back(sd);
    }

    out.col_ids.reserve(kept.size());
    out.values.resize(rows, static_cast<Eigen::Index>(kept.size()));
    for (size_t i = 0; i < kept.size(); ++i) {
        out.col_ids.push_back(table.col_ids[kept[i]]);
        for (Eigen::Index r = 0; r < rows; ++r) {
            const double v = table.values(r, kept[i]);
            const double x = std::isnan(v) ? means[i] : v;
            out.values(r, static_cast<Eigen::Index>(i)) = (x - means[i]) / stds[i];
        }
    }
    return out;
}

namespace {

std::vector<std::string> distinct_in_order(const std::vector<std::string>& labels) {
    std::vector<std::string> out;
    for (const auto& l : labels)
        if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
    return out;
}

// Pegasos-style subgradient training of one-vs-rest linear SVMs.
// Returns a classes x features weight matrix.
Eigen::MatrixXd train_ovr_svm(const Eigen::MatrixXd& x, const std::vector<int>& y,
                              int num_classes, std::uint64_t seed) {
    const auto m = x.rows();
    const auto d = x.cols();
    constexpr int kEpochs = 2000;
    constexpr double kC = 1.0;
    const double lambda = 1.0 / (kC * static_cast<double>(m));

    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(num_classes, d);
    // averaged Pegasos: the last-iterate weights oscillate around the optimum,
    // so the elimination scores use the average over the second half of
    // training, which converges much more tightly
    Eigen::MatrixXd w_sum = Eigen::MatrixXd::Zero(num_classes, d);
    long long averaged_epochs = 0;
    std::mt19937_64 rng(seed);
    std::vector<Eigen::Index> order(m);
    for (Eigen::Index i = 0; i < m; ++i) order[i] = i;

    std::vector<long long> t(num_classes, 0);
    for (int epoch = 0; epoch < kEpochs; ++epoch) {
        for (Eigen::Index i = m; i > 1; --i)
            std::swap(order[i - 1], order[uniform_index(rng, static_cast<std::uint64_t>(i))]);
        for (Eigen::Index idx : order) {
            const auto xi = x.row(idx);
            for (int c = 0; c < num_classes; ++c) {
                ++t[c];
                const double label = y[idx] == c ? 1.0 : -1.0;
                const double eta = 1.0 / (lambda * static_cast<double>(t[c]));
                const double margin = label * w.row(c).dot(xi);
                w.row(c) *= (1.0 - eta * lambda);
                if (margin < 1.0) w.row(c) += (eta * label) * xi;
            }
        }
        if (epoch >= kEpochs / 2) {
            w_sum += w;
            ++averaged_epochs;
        }
    }
    return w_sum / static_cast<double>(averaged_epochs);
}

}  // namespace

std::vector<std::string> svm_rank(const features::FeatureTable& table, std::uint64_t seed) {
    const auto d_total = table.values.cols();
    if (d_total < 1) throw std::runtime_error("svm_rank requires at least one feature");
    auto classes = distinct_in_order(table.authors);
    if (classes.size() < 2) throw std::runtime_error("svm_rank requires at least two classes");
    std::vector<int> y(table.authors.size());
    for (size_t i = 0; i < table.authors.size(); ++i)
        y[i] = static_cast<int>(std::find(classes.begin(), classes.end(), table.authors[i]) -
                                classes.begin());

    std::vector<Eigen::Index> active(d_total);
    for (Eigen::Index i = 0; i < d_total; ++i) active[i] = i;
    std::vector<Eigen::Index> eliminated;

    while (active.size() > 1) {
        Eigen::MatrixXd sub(table.values.rows(), static_cast<Eigen::Index>(active.size()));
        for (size_t j = 0; j < active.size(); ++j) sub.col(static_cast<Eigen::Index>(j)) = table.values.col(active[j]);
        const auto w = train_ovr_svm(sub, y, static_cast<int>(classes.size()), seed);
        // lowest sum-of-squared-weights goes; ties drop the later column so
        // earlier columns rank better
        size_t worst = 0;
        double worst_score = std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < active.size(); ++j) {
            const double score = w.col(static_cast<Eigen::Index>(j)).squaredNorm();
            if (score < worst_score || (score == worst_score && active[j] > active[worst])) {
                worst_score = score;
                worst = j;
            }
        }
        eliminated.push_back(active[worst]);
        active.erase(active.begin() + static_cast<ptrdiff_t>(worst));
    }
    eliminated.push_back(active[0]);

    std::vector<std::string> ranking;
    ranking.reserve(eliminated.size());
    for (auto it = eliminated.rbegin(); it != eliminated.rend(); ++it)
        ranking.push_back(table.col_ids[*it]);
    return ranking;
}

namespace {

// k-means++ center selection.
std::vector<Eigen::Index> kmeanspp_seeds(const Eigen::MatrixXd& data, int k,
                                         std::mt19937_64& rng) {
    const auto m = data.rows();
    std::vector<Eigen::Index> centers;
    centers.push_back(static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::uint64_t>(m))));
    Eigen::VectorXd d2 = (data.rowwise() - data.row(centers[0])).rowwise().squaredNorm();
    while (static_cast<int>(centers.size()) < k) {
        const double total = d2.sum();
        Eigen::Index chosen = 0;
        if (total <= 0.0) {
            chosen = static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::uint64_t>(m)));
        } else {
            double target = uniform01(rng) * total;
            for (Eigen::Index i = 0; i < m; ++i) {
                target -= d2[i];
                if (target <= 0.0) { chosen = i; break; }
                chosen = i;
            }
        }
        centers.push_back(chosen);
        d2 = d2.cwiseMin((data.rowwise() - data.row(chosen)).rowwise().squaredNorm());
    }
    return centers;
}

struct KmeansRun {
    std::vector<int> labels;
    double inertia = std::numeric_limits<double>::infinity();
};

KmeansRun kmeans_once(const Eigen::MatrixXd& data, int k, std::mt19937_64& rng) {
    const auto m = data.rows();
    const auto d = data.cols();
    Eigen::MatrixXd centers(k, d);
    {
        auto seeds = kmeanspp_seeds(data, k, rng);
        for (int c = 0; c < k; ++c) centers.row(c) = data.row(seeds[c]);
    }
    KmeansRun run;
    run.labels.assign(m, 0);
    double prev_inertia = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 300; ++iter) {
        double inertia = 0.0;
        for (Eigen::Index i = 0; i < m; ++i) {
            double best = std::numeric_limits<double>::infinity();
            int best_c = 0;
            for (int c = 0; c < k; ++c) {
                const double dist = (data.row(i) - centers.row(c)).squaredNorm();
                if (dist < best) { best = dist; best_c = c; }
            }
            run.labels[i] = best_c;
            inertia += best;
        }
        // update
        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, d);
        std::vector<long long> counts(k, 0);
        for (Eigen::Index i = 0; i < m; ++i) {
            sums.row(run.labels[i]) += data.row(i);
            ++counts[run.labels[i]];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                // move to the point farthest from its center
                double far = -1.0;
                Eigen::Index far_i = 0;
                for (Eigen::Index i = 0; i < m; ++i) {
                    const double dist = (data.row(i) - centers.row(run.labels[i])).squaredNorm();
                    if (dist > far) { far = dist; far_i = i; }
                }
                centers.row(c) = data.row(far_i);
            } else {
                centers.row(c) = sums.row(c) / static_cast<double>(counts[c]);
            }
        }
        run.inertia = inertia;
        if (std::abs(prev_inertia - inertia) < 1e-8) break;
        prev_inertia = inertia;
    }
    return run;
}

}  // namespace

std::vector<int> kmeans(const Eigen::MatrixXd& data, int k, std::uint64_t seed, int restarts) {
    if (k < 1 || k > data.rows())
        throw std::runtime_error("kmeans: k must be in [1, rows]");
    std::mt19937_64 master(seed);
    KmeansRun best;
    for (int r = 0; r < restarts; ++r) {
        std::mt19937_64 rng(master());
        auto run = kmeans_once(data, k, rng);
        if (run.inertia < best.inertia) best = std::move(run);
    }
    return best.labels;
}

namespace {

struct EmRun {
    std::vector<int> labels;
    double loglik = -std::numeric_limits<double>::infinity();
    bool monotone = true;
};

EmRun em_once(const Eigen::MatrixXd& data, int k, std::mt19937_64& rng) {
    const auto m = data.rows();
    const auto d = data.cols();
    constexpr double kVarFloor = 1e-6;
    constexpr int kMaxIter = 200;

    Eigen::MatrixXd means(k, d);
    {
        auto seeds = kmeanspp_seeds(data, k, rng);
        for (int c = 0; c < k; ++c) means.row(c) = data.row(seeds[c]);
    }
    Eigen::RowVectorXd global_var =
        ((data.rowwise() - data.colwise().mean()).array().square().colwise().sum() /
         static_cast<double>(m))
            .matrix();
    Eigen::MatrixXd vars = global_var.replicate(k, 1).cwiseMax(kVarFloor);
    Eigen::VectorXd weights = Eigen::VectorXd::Constant(k, 1.0 / k);

    Eigen::MatrixXd log_resp(m, k);
    EmRun run;
    double prev_ll = -std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < kMaxIter; ++iter) {
        // E-step, log domain
        double ll = 0.0;
        for (Eigen::Index i = 0; i < m; ++i) {
            double row_max = -std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                double lp = std::log(weights[c]);
                for (Eigen::Index f = 0; f < d; ++f) {
                    const double v = vars(c, f);
                    const double diff = data(i, f) - means(c, f);
                    lp += -0.5 * std::log(2.0 * M_PI * v) - diff * diff / (2.0 * v);
                }
                log_resp(i, c) = lp;
                row_max = std::max(row_max, lp);
            }
            double sum = 0.0;
            for (int c = 0; c < k; ++c) sum += std::exp(log_resp(i, c) - row_max);
            const double lse = row_max + std::log(sum);
            ll += lse;
            for (int c = 0; c < k; ++c) log_resp(i, c) = std::exp(log_resp(i, c) - lse);
        }
        if (iter > 0 && ll < prev_ll - 1e-9 * (1.0 + std::abs(prev_ll))) run.monotone = false;
        const bool converged = iter > 0 && std::abs(ll - prev_ll) < 1e-6;
        prev_ll = ll;
        if (converged) break;

        // M-step (log_resp now holds responsibilities)
        for (int c = 0; c < k; ++c) {
            const double nc = log_resp.col(c).sum();
            if (nc < 1e-12) continue;  // starved component keeps its parameters
            weights[c] = nc / static_cast<double>(m);
            means.row(c) = (log_resp.col(c).transpose() * data) / nc;
            for (Eigen::Index f = 0; f < d; ++f) {
                double acc = 0.0;
                for (Eigen::Index i = 0; i < m; ++i) {
                    const double diff = data(i, f) - means(c, f);
                    acc += log_resp(i, c) * diff * diff;
                }
                vars(c, f) = std::max(acc / nc, kVarFloor);
            }
        }
        const double wsum = weights.sum();
        weights /= wsum;
    }
    run.loglik = prev_ll;
    run.labels.assign(m, 0);
    for (Eigen::Index i = 0; i < m; ++i) {
        double best = -1.0;
        for (int c = 0; c < k; ++c)
            if (log_resp(i, c) > best) { best = log_resp(i, c); run.labels[i] = c; }
    }
    return run;
}

}  // namespace

std::vector<int> em_cluster(const Eigen::MatrixXd& data, int k, std::uint64_t seed, int restarts) {
    if (k < 1 || k > data.rows())
        throw std::runtime_error("em_cluster: k must be in [1, rows]");
    std::mt19937_64 master(seed);
    EmRun best;
    bool have = false;
    for (int r = 0; r < restarts; ++r) {
        std::mt19937_64 rng(master());
        auto run = em_once(data, k, rng);
        if (!run.monotone)
            throw std::runtime_error("EM log-likelihood decreased; numerical failure");
        if (!have || run.loglik > best.loglik) { best = std::move(run); have = true; }
    }
    return best.labels;
}

namespace {

// Hungarian algorithm (potentials form), minimizing cost on a square matrix.
std::vector<int> hungarian_min(const Eigen::MatrixXd& cost) {
    const int n = static_cast<int>(cost.rows());
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, std::numeric_limits<double>::infinity());
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = std::numeric_limits<double>::infinity();
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) { minv[j] = cur; way[j] = j0; }
                if (minv[j] < delta) { delta = minv[j]; j1 = j; }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) { u[p[j]] += delta; v[j] -= delta; }
                else minv[j] -= delta;
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

}  // namespace

double cluster_accuracy(const std::vector<int>& labels, const std::vector<std::string>& authors) {
    if (labels.size() != authors.size())
        throw std::runtime_error("cluster_accuracy: label/author length mismatch");
    if (labels.empty()) throw std::runtime_error("cluster_accuracy: empty input");
    auto classes = distinct_in_order(authors);
    int num_clusters = 0;
    for (int l : labels) num_clusters = std::max(num_clusters, l + 1);
    const int n = std::max(num_clusters, static_cast<int>(classes.size()));

    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(n, n);
    for (size_t i = 0; i < labels.size(); ++i) {
        const int a = static_cast<int>(
            std::find(classes.begin(), classes.end(), authors[i]) - classes.begin());
        counts(labels[i], a) += 1.0;
    }
    const auto assignment = hungarian_min(-counts);
    double matched = 0.0;
    for (int c = 0; c < n; ++c)
        if (assignment[c] >= 0) matched += counts(c, assignment[c]);
    return matched / static_cast<double>(labels.size());
}

namespace {

Eigen::MatrixXd select_columns(const features::FeatureTable& table,
                               const std::vector<std::string>& ids, size_t n) {
    std::unordered_map<std::string, Eigen::Index> index;
    for (size_t c = 0; c < table.col_ids.size(); ++c)
        index[table.col_ids[c]] = static_cast<Eigen::Index>(c);
    Eigen::MatrixXd out(table.values.rows(), static_cast<Eigen::Index>(n));
    for (size_t j = 0; j < n; ++j) {
        auto it = index.find(ids[j]);
        if (it == index.end()) throw std::runtime_error("ranking id not in table: " + ids[j]);
        out.col(static_cast<Eigen::Index>(j)) = table.values.col(it->second);
    }
    return out;
}

std::vector<int> run_method(const Eigen::MatrixXd& data, Method method, int k,
                            std::uint64_t seed) {
    return method == Method::em ? em_cluster(data, k, seed) : kmeans(data, k, seed);
}

}  // namespace

ExperimentResult sweep_top_n(const features::FeatureTable& standardized,
                             const std::vector<std::string>& ranking, Method method, int k,
                             std::uint64_t seed) {
    if (ranking.size() != standardized.col_ids.size())
        throw std::runtime_error("ranking must cover all columns");
    ExperimentResult res;
    res.method = method_name(method);
    res.seed = seed;
    const size_t f = ranking.size();
    res.curve.reserve(f);
    for (size_t n = 1; n <= f; ++n) {
        const auto data = select_columns(standardized, ranking, n);
        const auto labels = run_method(data, method, k, seed);
        const double acc = cluster_accuracy(labels, standardized.authors);
        res.curve.push_back(acc);
        if (acc > res.best_accuracy) {
            res.best_accuracy = acc;
            res.best_n = static_cast<int>(n);
        }
    }
    return res;
}

PairwiseResult pairwise_experiments(const features::FeatureTable& raw, Method method,
                                    std::uint64_t seed) {
    auto authors = distinct_in_order(raw.authors);
    if (authors.size() < 2) throw std::runtime_error("pairwise experiments need >= 2 authors");
    for (const auto& a : authors) {
        const auto count = std::count(raw.authors.begin(), raw.authors.end(), a);
        if (count < 2) throw std::runtime_error("author with fewer than two books: " + a);
    }

    PairwiseResult out;
    out.authors = authors;
    const int na = static_cast<int>(authors.size());
    out.accuracy = Eigen::MatrixXd::Constant(na, na, std::nan(""));

    for (int a = 0; a < na; ++a) {
        for (int b = a + 1; b < na; ++b) {
            features::FeatureTable sub;
            sub.col_ids = raw.col_ids;
            std::vector<Eigen::Index> rows;
            for (size_t r = 0; r < raw.authors.size(); ++r)
                if (raw.authors[r] == authors[a] || raw.authors[r] == authors[b])
                    rows.push_back(static_cast<Eigen::Index>(r));
            sub.values.resize(static_cast<Eigen::Index>(rows.size()), raw.values.cols());
            for (size_t r = 0; r < rows.size(); ++r) {
                sub.values.row(static_cast<Eigen::Index>(r)) = raw.values.row(rows[r]);
                sub.row_ids.push_back(raw.row_ids[rows[r]]);
                sub.authors.push_back(raw.authors[rows[r]]);
            }
            const auto std_sub = standardize(sub);
            const auto ranking = svm_rank(std_sub, seed);
            const auto res = sweep_top_n(std_sub, ranking, method, 2, seed);
            out.accuracy(a, b) = res.best_accuracy;
            out.accuracy(b, a) = res.best_accuracy;
        }
    }
    return out;
}

PcaResult pca_project(const features::FeatureTable& standardized,
                      const std::vector<std::string>& ranking, int n_features, int dims) {
    if (standardized.values.rows() < 2) throw std::runtime_error("PCA requires at least two rows");
    if (n_features < 1 || static_cast<size_t>(n_features) > ranking.size())
        throw std::runtime_error("pca_project: invalid feature count");
    if (dims < 1 || dims > n_features) throw std::runtime_error("pca_project: invalid dims");

    const auto x = select_columns(standardized, ranking, static_cast<size_t>(n_features));
    const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
    const Eigen::MatrixXd cov =
        centered.transpose() * centered / static_cast<double>(x.rows());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw std::runtime_error("PCA eigensolver failed");

    // eigenvalues ascending; reorder descending
    const auto evals = solver.eigenvalues();
    const auto evecs = solver.eigenvectors();
    PcaResult res;
    res.feature_ids.assign(ranking.begin(), ranking.begin() + n_features);
    res.explained_ratio.resize(n_features);
    const double total = std::max(evals.sum(), 1e-300);
    Eigen::MatrixXd components(n_features, dims);
    for (int i = 0; i < n_features; ++i)
        res.explained_ratio[i] = std::max(evals[n_features - 1 - i], 0.0) / total;
    res.explained_ratio /= res.explained_ratio.sum();
    for (int c = 0; c < dims; ++c) {
        Eigen::VectorXd v = evecs.col(n_features - 1 - c);
        // deterministic sign: largest-magnitude entry positive
        Eigen::Index arg;
        v.cwiseAbs().maxCoeff(&arg);
        if (v[arg] < 0) v = -v;
        components.col(c) = v;
    }
    res.coords = centered * components;
    res.abs_weights = components.cwiseAbs();
    return res;
}

}  // namespace mlpipe
