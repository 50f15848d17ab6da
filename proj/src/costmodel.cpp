#include "scj/costmodel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "scj/join.hpp"

namespace scj {

double cost_intersection(double n_cl, double n_postings, IntersectKind method,
                         const CostConstants& k) {
    const double merge = k.a1 * n_cl + k.b1 * n_postings + k.g1;
    const double binary = k.a2 * n_cl * std::log2(n_postings + 1.0) + k.b2;
    switch (method) {
        case IntersectKind::Merge:
            return merge;
        case IntersectKind::Binary:
            return binary;
        case IntersectKind::Hybrid:
            break;
    }
    return std::min(merge, binary);
}

double cost_direct(double n_clp, double n_rl_eq, const CostConstants& k) {
    return k.a3 * n_clp * n_rl_eq + k.b3;
}

double cost_verification(double n_left, double left_suffix_sum, double n_right,
                         double right_suffix_sum, const CostConstants& k) {
    return k.a4 * n_right * left_suffix_sum + k.b4 * n_left * right_suffix_sum + k.g4;
}

double estimate_intersection_size(double n_cl, double n_postings, double n_s) {
    if (n_s <= 0.0) throw std::runtime_error("estimate requires a non-empty right collection");
    return n_cl * n_postings / n_s;
}

double estimate_suffix_sum(double cl_suffix_sum, double n_postings, double n_s) {
    if (n_s <= 0.0) throw std::runtime_error("estimate requires a non-empty right collection");
    return cl_suffix_sum * n_postings / n_s;
}

bool continue_as_limit(const SubtreeStats& node, const ClStats& cl, std::size_t n_postings,
                       std::size_t n_s, IntersectKind method, const CostConstants& k) {
    const double n_cl = static_cast<double>(cl.size);
    const double postings = static_cast<double>(n_postings);
    const double est_clp = estimate_intersection_size(n_cl, postings, static_cast<double>(n_s));
    const double est_sfx =
        estimate_suffix_sum(static_cast<double>(cl.suffix_sum), postings, static_cast<double>(n_s));

    const double verify_left = static_cast<double>(node.object_count - node.rl_eq_count);
    const double cost_a = cost_intersection(n_cl, postings, method, k) +
                          cost_direct(est_clp, static_cast<double>(node.rl_eq_count), k) +
                          cost_verification(verify_left, static_cast<double>(node.suffix_sum),
                                            est_clp, est_sfx, k);

    // B skips the intersection, so suffixes start one position earlier on both
    // sides and the node's own rl objects are verified too.
    const double cost_b = cost_verification(
        static_cast<double>(node.object_count),
        static_cast<double>(node.suffix_sum + node.long_count), n_cl,
        static_cast<double>(cl.suffix_sum + cl.long_count), k);
    return cost_a <= cost_b;
}

bool continue_as_limit(const SubtreeStats& node, const CandidateList& cl, std::size_t n_postings,
                       std::size_t n_s, IntersectKind method, const CostConstants& k) {
    return continue_as_limit(node, ClStats::of(cl), n_postings, n_s, method, k);
}

bool fit_linear3(const std::vector<std::array<double, 3>>& rows, double& a, double& b, double& g,
                 double& r2) {
    // Normal equations for t ~ a*x + b*y + g.
    double m[3][4] = {};
    for (const auto& row : rows) {
        const double f[3] = {row[0], row[1], 1.0};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) m[i][j] += f[i] * f[j];
            m[i][3] += f[i] * row[2];
        }
    }
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r) {
            if (std::fabs(m[r][col]) > std::fabs(m[pivot][col])) pivot = r;
        }
        if (std::fabs(m[pivot][col]) < 1e-12) return false;
        std::swap(m[col], m[pivot]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double factor = m[r][col] / m[col][col];
            for (int c = col; c < 4; ++c) m[r][c] -= factor * m[col][c];
        }
    }
    a = m[0][3] / m[0][0];
    b = m[1][3] / m[1][1];
    g = m[2][3] / m[2][2];
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(g)) return false;

    double mean = 0.0;
    for (const auto& row : rows) mean += row[2];
    mean /= static_cast<double>(rows.size());
    double ss_tot = 0.0, ss_res = 0.0;
    for (const auto& row : rows) {
        const double pred = a * row[0] + b * row[1] + g;
        ss_tot += (row[2] - mean) * (row[2] - mean);
        ss_res += (row[2] - pred) * (row[2] - pred);
    }
    r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
    return true;
}

bool fit_linear2(const std::vector<std::array<double, 2>>& rows, double& a, double& b, double& r2) {
    double su = 0.0, st = 0.0, suu = 0.0, sut = 0.0;
    const double n = static_cast<double>(rows.size());
    for (const auto& row : rows) {
        su += row[0];
        st += row[1];
        suu += row[0] * row[0];
        sut += row[0] * row[1];
    }
    const double det = n * suu - su * su;
    if (std::fabs(det) < 1e-12) return false;
    const double a_out = (n * sut - su * st) / det;
    const double b_out = (st - a_out * su) / n;
    if (!std::isfinite(a_out) || !std::isfinite(b_out)) return false;
    a = a_out;
    b = b_out;

    const double mean = st / n;
    double ss_tot = 0.0, ss_res = 0.0;
    for (const auto& row : rows) {
        const double pred = a * row[0] + b;
        ss_tot += (row[1] - mean) * (row[1] - mean);
        ss_res += (row[1] - pred) * (row[1] - pred);
    }
    r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
    return true;
}

namespace {

using Clock = std::chrono::steady_clock;

volatile std::uint64_t g_sink = 0;

std::vector<Oid> make_sorted_list(std::mt19937_64& rng, std::size_t n, std::size_t universe) {
    std::vector<Oid> list;
    list.reserve(n);
    // Sparse strided draw keeps the list sorted without a dedupe pass.
    std::size_t value = rng() % 3;
    const std::size_t max_step = std::max<std::size_t>(2, 2 * universe / std::max<std::size_t>(n, 1));
    for (std::size_t i = 0; i < n; ++i) {
        list.push_back(static_cast<Oid>(value));
        value += 1 + rng() % max_step;
    }
    return list;
}

double median_seconds(std::vector<double>& samples) {
    std::sort(samples.begin(), samples.end());
    return samples[samples.size() / 2];
}

template <typename Fn>
double time_median(std::size_t repetitions, Fn&& fn) {
    std::vector<double> samples;
    samples.reserve(repetitions);
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
        const auto start = Clock::now();
        fn();
        const auto stop = Clock::now();
        samples.push_back(std::chrono::duration<double>(stop - start).count());
    }
    return median_seconds(samples);
}

}  // namespace

CalibrationResult calibrate(const CalibrationOptions& options) {
    CalibrationResult result;
    std::mt19937_64 rng(options.seed);

    std::vector<std::array<double, 3>> merge_rows;
    std::vector<std::array<double, 2>> binary_rows;
    {
        const std::size_t max_size =
            *std::max_element(options.intersect_sizes.begin(), options.intersect_sizes.end());
        std::vector<std::uint32_t> lengths(8 * max_size + 64, 16);
        for (std::size_t x : options.intersect_sizes) {
            for (std::size_t y : options.intersect_sizes) {
                CandidateList cl;
                cl.oids = make_sorted_list(rng, x, 4 * std::max(x, y));
                const std::vector<Oid> postings = make_sorted_list(rng, y, 4 * std::max(x, y));
                const double t_merge = time_median(options.repetitions, [&] {
                    CandidateList out = intersect_merge(cl, postings, 8, lengths);
                    g_sink = g_sink + out.size();
                });
                const double t_binary = time_median(options.repetitions, [&] {
                    CandidateList out = intersect_binary(cl, postings, 8, lengths);
                    g_sink = g_sink + out.size();
                });
                merge_rows.push_back({static_cast<double>(x), static_cast<double>(y), t_merge});
                binary_rows.push_back(
                    {static_cast<double>(x) * std::log2(static_cast<double>(y) + 1.0), t_binary});
            }
        }
    }

    std::vector<std::array<double, 2>> direct_rows;
    for (std::size_t x : options.pair_sizes) {
        for (std::size_t y : options.pair_sizes) {
            const double t = time_median(options.repetitions, [&] {
                std::uint64_t acc = 0;
                for (std::size_t i = 0; i < x; ++i) {
                    for (std::size_t j = 0; j < y; ++j) acc += i ^ j;
                }
                g_sink = g_sink + acc;
            });
            direct_rows.push_back({static_cast<double>(x) * static_cast<double>(y), t});
        }
    }

    std::vector<std::array<double, 3>> verify_rows;
    {
        static constexpr std::pair<std::size_t, std::size_t> kSuffixMix[] = {
            {4, 12}, {12, 4}, {8, 8}, {16, 6}, {6, 16}};
        std::size_t mix = 0;
        for (std::size_t nl : options.verify_sizes) {
            for (std::size_t nr : options.verify_sizes) {
                const auto [sl, sr] = kSuffixMix[mix++ % std::size(kSuffixMix)];
                const std::size_t width = std::max(sl, sr);
                SetObject right;
                for (std::size_t i = 0; i < width; ++i) right.items.push_back(static_cast<ItemId>(i));
                SetObject left;
                for (std::size_t i = 0; i < sl; ++i) {
                    left.items.push_back(static_cast<ItemId>(i * width / sl));
                }
                left.items.erase(std::unique(left.items.begin(), left.items.end()),
                                 left.items.end());
                const double t = time_median(options.repetitions, [&] {
                    std::uint64_t acc = 0;
                    for (std::size_t i = 0; i < nl; ++i) {
                        for (std::size_t j = 0; j < nr; ++j) {
                            acc += verify_suffix(left, right, 0) ? 1 : 0;
                        }
                    }
                    g_sink = g_sink + acc;
                });
                const double fl = static_cast<double>(nl) * static_cast<double>(left.items.size());
                const double fr = static_cast<double>(nr) * static_cast<double>(sr);
                verify_rows.push_back({static_cast<double>(nr) * fl,
                                       static_cast<double>(nl) * fr, t});
            }
        }
    }

    CostConstants k;
    bool ok = true;
    ok &= fit_linear3(merge_rows, k.a1, k.b1, k.g1, result.r2_merge);
    ok &= fit_linear2(binary_rows, k.a2, k.b2, result.r2_binary);
    ok &= fit_linear2(direct_rows, k.a3, k.b3, result.r2_direct);
    ok &= fit_linear3(verify_rows, k.a4, k.b4, k.g4, result.r2_verification);
    if (!ok) {
        result.degenerate = true;
        result.warnings.push_back("degenerate fit; falling back to unit constants");
        result.constants = CostConstants{};
        return result;
    }
    for (double* c : {&k.a1, &k.b1, &k.g1, &k.a2, &k.b2, &k.a3, &k.b3, &k.a4, &k.b4, &k.g4}) {
        if (*c < 0.0) *c = 0.0;
    }
    result.constants = k;
    return result;
}

void save_constants(const CostConstants& k, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write constants file: " + path.string());
    out << "a1 " << k.a1 << "\nb1 " << k.b1 << "\ng1 " << k.g1 << "\na2 " << k.a2 << "\nb2 "
        << k.b2 << "\na3 " << k.a3 << "\nb3 " << k.b3 << "\na4 " << k.a4 << "\nb4 " << k.b4
        << "\ng4 " << k.g4 << "\n";
}

CostConstants load_constants(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read constants file: " + path.string());
    CostConstants k;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        std::string name;
        double value = 0.0;
        if (!(fields >> name >> value)) {
            throw std::runtime_error("malformed constants line: " + line);
        }
        if (name == "a1") k.a1 = value;
        else if (name == "b1") k.b1 = value;
        else if (name == "g1") k.g1 = value;
        else if (name == "a2") k.a2 = value;
        else if (name == "b2") k.b2 = value;
        else if (name == "a3") k.a3 = value;
        else if (name == "b3") k.b3 = value;
        else if (name == "a4") k.a4 = value;
        else if (name == "b4") k.b4 = value;
        else if (name == "g4") k.g4 = value;
        else throw std::runtime_error("unknown constant: " + name);
    }
    return k;
}

}  // namespace scj
