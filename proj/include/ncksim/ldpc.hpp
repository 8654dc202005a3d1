#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncksim {

struct LdpcError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Binary LDPC code loaded from an alist file. H is stored as edge adjacency;
// the systematic encoder comes from column-permuted GF(2) elimination on H.
class LdpcCode {
public:
    static LdpcCode load_alist(const std::string& path);

    // Builds directly from a dense 0/1 matrix (rows = checks). Used by tests
    // and by the small bundled codes.
    static LdpcCode from_rows(int n, const std::vector<std::vector<int>>& check_vars);

    int n() const { return n_; }               // codeword length
    int c() const { return c_; }               // number of checks
    int rank() const { return rank_; }
    int info_len() const { return n_ - rank_; }
    int num_edges() const { return static_cast<int>(edge_var_.size()); }

    // Adjacency (phi_c / psi_n) with parallel edge-id lists: edge e couples
    // check check_of(e) and variable var_of(e).
    const std::vector<int>& check_vars(int c) const { return row_adj_[c]; }
    const std::vector<int>& check_edges(int c) const { return row_edges_[c]; }
    const std::vector<int>& var_checks(int n) const { return col_adj_[n]; }
    const std::vector<int>& var_edges(int n) const { return col_edges_[n]; }
    int var_of(int e) const { return edge_var_[e]; }

    const std::vector<int>& systematic_positions() const { return info_pos_; }

    std::vector<std::uint8_t> encode(std::span<const std::uint8_t> info) const;
    bool syndrome_ok(std::span<const std::uint8_t> hard_bits) const;

    struct DecodeResult {
        std::vector<std::uint8_t> bits;
        bool converged = false;
        int iterations = 0;
    };
    // Flooding-schedule sum-product BP, early exit on zero syndrome. Used
    // standalone for unit testing; the joint detector owns its own schedule.
    DecodeResult bp_decode(std::span<const double> channel_llrs, int max_iter) const;

private:
    void finalize();

    int n_ = 0;
    int c_ = 0;
    int rank_ = 0;
    std::vector<std::vector<int>> row_adj_, col_adj_;
    std::vector<std::vector<int>> row_edges_, col_edges_;
    std::vector<int> edge_var_;

    // Encoder: parity position/row pairs from the elimination, in elimination
    // order, plus the info (non-pivot) positions.
    std::vector<int> info_pos_;
    std::vector<int> pivot_pos_;                  // pivot column per reduced row
    std::vector<std::vector<int>> reduced_rows_;  // reduced H rows (column indices)
};

// PN update, Eq-style soft XOR over a check: 2 atanh(prod tanh(L/2)) with the
// shared clip rules. An empty list (degree-1 check) yields +kLlrMax.
double check_node_update(std::span<const double> incoming);

} // namespace ncksim
