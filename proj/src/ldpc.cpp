#include "ncksim/ldpc.hpp"
#include "ncksim/llr.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ncksim {

double check_node_update(std::span<const double> incoming)
{
    if (incoming.empty())
        return kLlrMax;
    double p = 1.0;
    for (double l : incoming)
        p *= clipped_tanh_half(l);
    p = std::clamp(p, -kAtanhArgMax, kAtanhArgMax);
    return 2.0 * std::atanh(p);
}

LdpcCode LdpcCode::from_rows(int n, const std::vector<std::vector<int>>& check_vars)
{
    LdpcCode code;
    code.n_ = n;
    code.c_ = static_cast<int>(check_vars.size());
    code.row_adj_ = check_vars;
    for (auto& row : code.row_adj_)
        std::sort(row.begin(), row.end());
    code.finalize();
    return code;
}

LdpcCode LdpcCode::load_alist(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw LdpcError("alist: cannot open " + path);

    auto next_int = [&](const char* what) {
        long long v;
        if (!(in >> v))
            throw LdpcError(std::string("alist: truncated file, expected ") + what);
        return v;
    };

    // MacKay layout: N C / max_dv max_dc / per-column degrees / per-row
    // degrees / per-column entries (1-based, zero padded) / per-row entries.
    int n = static_cast<int>(next_int("N"));
    int c = static_cast<int>(next_int("C"));
    if (n <= 0 || c <= 0)
        throw LdpcError("alist: nonpositive dimensions");
    int max_dv = static_cast<int>(next_int("max column degree"));
    int max_dc = static_cast<int>(next_int("max row degree"));

    std::vector<int> col_deg(n), row_deg(c);
    for (int i = 0; i < n; ++i) {
        col_deg[i] = static_cast<int>(next_int("column degree"));
        if (col_deg[i] < 0 || col_deg[i] > max_dv)
            throw LdpcError("alist: column degree out of range");
    }
    for (int i = 0; i < c; ++i) {
        row_deg[i] = static_cast<int>(next_int("row degree"));
        if (row_deg[i] < 0 || row_deg[i] > max_dc)
            throw LdpcError("alist: row degree out of range");
    }

    std::vector<std::vector<int>> cols(n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < max_dv; ++k) {
            int v = static_cast<int>(next_int("column entry"));
            if (v > 0)
                cols[i].push_back(v - 1);
            else if (k < col_deg[i])
                throw LdpcError("alist: zero entry inside declared column degree");
        }
        if (static_cast<int>(cols[i].size()) != col_deg[i])
            throw LdpcError("alist: column " + std::to_string(i) +
                            " entry count disagrees with declared degree");
    }

    std::vector<std::vector<int>> rows(c);
    for (int i = 0; i < c; ++i) {
        for (int k = 0; k < max_dc; ++k) {
            int v = static_cast<int>(next_int("row entry"));
            if (v > 0) {
                if (v > n)
                    throw LdpcError("alist: row entry exceeds N");
                rows[i].push_back(v - 1);
            } else if (k < row_deg[i])
                throw LdpcError("alist: zero entry inside declared row degree");
        }
        if (static_cast<int>(rows[i].size()) != row_deg[i])
            throw LdpcError("alist: row " + std::to_string(i) +
                            " entry count disagrees with declared degree");
    }

    // Cross-check the two adjacency lists.
    std::vector<std::vector<int>> rows_from_cols(c);
    for (int i = 0; i < n; ++i)
        for (int r : cols[i]) {
            if (r >= c)
                throw LdpcError("alist: column entry exceeds C");
            rows_from_cols[r].push_back(i);
        }
    for (int i = 0; i < c; ++i) {
        auto a = rows[i];
        auto b = rows_from_cols[i];
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b)
            throw LdpcError("alist: row/column adjacency lists disagree at row " +
                            std::to_string(i));
    }

    return from_rows(n, rows);
}

void LdpcCode::finalize()
{
    col_adj_.assign(n_, {});
    row_edges_.assign(c_, {});
    col_edges_.assign(n_, {});
    edge_var_.clear();
    for (int ci = 0; ci < c_; ++ci)
        for (int v : row_adj_[ci]) {
            int e = static_cast<int>(edge_var_.size());
            edge_var_.push_back(v);
            row_edges_[ci].push_back(e);
            col_adj_[v].push_back(ci);
            col_edges_[v].push_back(e);
        }

    // GF(2) elimination with column pivoting; produces RREF rows used for
    // systematic encoding in the original column order.
    std::vector<std::vector<std::uint8_t>> m(c_, std::vector<std::uint8_t>(n_, 0));
    for (int ci = 0; ci < c_; ++ci)
        for (int v : row_adj_[ci])
            m[ci][v] = 1;

    pivot_pos_.clear();
    int row = 0;
    for (int col = 0; col < n_ && row < c_; ++col) {
        int pivot = -1;
        for (int r = row; r < c_; ++r)
            if (m[r][col]) {
                pivot = r;
                break;
            }
        if (pivot < 0)
            continue;
        std::swap(m[row], m[pivot]);
        for (int r = 0; r < c_; ++r)
            if (r != row && m[r][col])
                for (int k = 0; k < n_; ++k)
                    m[r][k] ^= m[row][k];
        pivot_pos_.push_back(col);
        ++row;
    }
    rank_ = row;

    reduced_rows_.assign(rank_, {});
    for (int r = 0; r < rank_; ++r)
        for (int k = 0; k < n_; ++k)
            if (m[r][k] && k != pivot_pos_[r])
                reduced_rows_[r].push_back(k);

    info_pos_.clear();
    std::vector<std::uint8_t> is_pivot(n_, 0);
    for (int p : pivot_pos_)
        is_pivot[p] = 1;
    for (int k = 0; k < n_; ++k)
        if (!is_pivot[k])
            info_pos_.push_back(k);
}

std::vector<std::uint8_t> LdpcCode::encode(std::span<const std::uint8_t> info) const
{
    if (static_cast<int>(info.size()) != info_len())
        throw LdpcError("encode: expected " + std::to_string(info_len()) +
                        " info bits, got " + std::to_string(info.size()));
    std::vector<std::uint8_t> x(n_, 0);
    for (std::size_t i = 0; i < info.size(); ++i)
        x[info_pos_[i]] = info[i] & 1;
    // RREF rows touch only the pivot column and info columns.
    for (int r = 0; r < rank_; ++r) {
        std::uint8_t parity = 0;
        for (int k : reduced_rows_[r])
            parity ^= x[k];
        x[pivot_pos_[r]] = parity;
    }
    return x;
}

bool LdpcCode::syndrome_ok(std::span<const std::uint8_t> hard_bits) const
{
    if (static_cast<int>(hard_bits.size()) != n_)
        throw LdpcError("syndrome_ok: length mismatch");
    for (int ci = 0; ci < c_; ++ci) {
        std::uint8_t s = 0;
        for (int v : row_adj_[ci])
            s ^= hard_bits[v] & 1;
        if (s)
            return false;
    }
    return true;
}

LdpcCode::DecodeResult LdpcCode::bp_decode(std::span<const double> channel_llrs,
                                           int max_iter) const
{
    const int ne = num_edges();
    std::vector<double> v2c(ne), c2v(ne, 0.0);
    for (int v = 0; v < n_; ++v)
        for (int e : col_edges_[v])
            v2c[e] = channel_llrs[v];

    DecodeResult res;
    res.bits.assign(n_, 0);

    std::vector<double> th;
    for (int it = 1; it <= max_iter; ++it) {
        // Check-node pass with prefix/suffix tanh products.
        for (int ci = 0; ci < c_; ++ci) {
            const auto& edges = row_edges_[ci];
            const int deg = static_cast<int>(edges.size());
            th.resize(deg);
            for (int i = 0; i < deg; ++i)
                th[i] = clipped_tanh_half(v2c[edges[i]]);
            for (int i = 0; i < deg; ++i) {
                double p = 1.0;
                for (int k = 0; k < deg; ++k)
                    if (k != i)
                        p *= th[k];
                p = std::clamp(p, -kAtanhArgMax, kAtanhArgMax);
                c2v[edges[i]] = 2.0 * std::atanh(p);
            }
        }
        // Variable-node pass plus hard decision.
        bool any_information = false;
        for (int v = 0; v < n_; ++v) {
            double total = channel_llrs[v];
            for (int e : col_edges_[v])
                total += c2v[e];
            any_information |= total != 0.0;
            res.bits[v] = static_cast<std::uint8_t>(hard_bit(total));
            for (int e : col_edges_[v])
                v2c[e] = clip_llr(total - c2v[e]);
        }
        res.iterations = it;
        // The all-zero-LLR fixed point trivially satisfies the syndrome but
        // carries no information; report it as non-convergence.
        if (any_information && syndrome_ok(res.bits)) {
            res.converged = true;
            break;
        }
    }
    return res;
}

} // namespace ncksim
