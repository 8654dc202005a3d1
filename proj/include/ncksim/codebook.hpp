#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncksim {

using cplx = std::complex<double>;

struct CodebookError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// SCMA codebook: per-user codeword sets plus the sparse signature matrix that
// defines the factor-graph topology. Immutable after load.
struct Codebook {
    int J = 0; // users
    int R = 0; // resources
    int M = 0; // codebook size, 2^b
    int b = 0; // bits per symbol

    // codewords[j][m] is an R-vector; zero wherever signature is zero.
    std::vector<std::vector<std::vector<cplx>>> codewords;
    std::vector<std::vector<std::uint8_t>> signature; // R x J

    // Neighbor sets derived from the signature.
    std::vector<std::vector<int>> resource_users; // xi_r: users on resource r
    std::vector<std::vector<int>> user_resources; // zeta_j: resources of user j

    int d_v = 0; // column weight (resources per user)
    int d_f = 0; // row weight (users per resource)

    void build_adjacency();
};

// Big-endian bit order: bits[0] is the MSB of the symbol index.
int bits_to_symbol(std::span<const std::uint8_t> bits);
void symbol_to_bits(int m, int b, std::uint8_t* out);
inline int symbol_bit(int m, int b, int i) { return (m >> (b - 1 - i)) & 1; }

// Loads and fully validates a codebook. Regular signature, M = 2^b, unit
// average codeword energy, and sparsity alignment are all enforced here.
Codebook load_codebook(const std::string& path);

// Validation entry used by the loader and by tests that build codebooks
// directly. `strict_overload` additionally requires J > R and a regular
// signature (the production invariants); toy test graphs can skip those.
void validate_codebook(const Codebook& cb, bool strict_overload = true);

std::span<const cplx> map_bits(const Codebook& cb, int j, std::span<const std::uint8_t> bits);

// M operator: symbol-probability vector -> b bit LLRs, L = log(P0/P1),
// clipped to +-kLlrMax. Input is renormalized internally.
std::vector<double> marginalize(const Codebook& cb, std::span<const double> symbol_probs);

// M^-1 operator: b bit LLRs -> normalized length-M probability vector.
std::vector<double> inverse_marginalize(const Codebook& cb, std::span<const double> llrs);

} // namespace ncksim
