#include "ncksim/codebook.hpp"
#include "ncksim/llr.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>

namespace ncksim {

void Codebook::build_adjacency()
{
    resource_users.assign(R, {});
    user_resources.assign(J, {});
    for (int r = 0; r < R; ++r)
        for (int j = 0; j < J; ++j)
            if (signature[r][j]) {
                resource_users[r].push_back(j);
                user_resources[j].push_back(r);
            }
    d_f = resource_users.empty() ? 0 : static_cast<int>(resource_users[0].size());
    d_v = user_resources.empty() ? 0 : static_cast<int>(user_resources[0].size());
}

int bits_to_symbol(std::span<const std::uint8_t> bits)
{
    int m = 0;
    for (auto bit : bits)
        m = (m << 1) | (bit & 1);
    return m;
}

void symbol_to_bits(int m, int b, std::uint8_t* out)
{
    for (int i = 0; i < b; ++i)
        out[i] = static_cast<std::uint8_t>((m >> (b - 1 - i)) & 1);
}

void validate_codebook(const Codebook& cb, bool strict_overload)
{
    if (cb.M != (1 << cb.b))
        throw CodebookError("codebook: M=" + std::to_string(cb.M) + " is not 2^b with b=" +
                            std::to_string(cb.b));
    if (strict_overload && cb.J <= cb.R)
        throw CodebookError("codebook: expected overloading J > R, got J=" +
                            std::to_string(cb.J) + " R=" + std::to_string(cb.R));

    if (static_cast<int>(cb.signature.size()) != cb.R)
        throw CodebookError("codebook: signature row count != R");
    for (const auto& row : cb.signature)
        if (static_cast<int>(row.size()) != cb.J)
            throw CodebookError("codebook: signature column count != J");

    if (strict_overload) {
        // Regular signature: identical column weight d_v and row weight d_f.
        int dv0 = 0;
        for (int r = 0; r < cb.R; ++r)
            dv0 += cb.signature[r][0];
        for (int j = 0; j < cb.J; ++j) {
            int dv = 0;
            for (int r = 0; r < cb.R; ++r)
                dv += cb.signature[r][j];
            if (dv != dv0)
                throw CodebookError("codebook: irregular signature, column " +
                                    std::to_string(j) + " has weight " + std::to_string(dv) +
                                    " (expected " + std::to_string(dv0) + ")");
        }
        int df0 = 0;
        for (int j = 0; j < cb.J; ++j)
            df0 += cb.signature[0][j];
        for (int r = 0; r < cb.R; ++r) {
            int df = 0;
            for (int j = 0; j < cb.J; ++j)
                df += cb.signature[r][j];
            if (df != df0)
                throw CodebookError("codebook: irregular signature, row " + std::to_string(r) +
                                    " has weight " + std::to_string(df));
        }
    }

    if (static_cast<int>(cb.codewords.size()) != cb.J)
        throw CodebookError("codebook: codeword user count != J");
    for (int j = 0; j < cb.J; ++j) {
        if (static_cast<int>(cb.codewords[j].size()) != cb.M)
            throw CodebookError("codebook: user " + std::to_string(j) +
                                " codeword count != M");
        double energy = 0.0;
        for (int m = 0; m < cb.M; ++m) {
            const auto& cw = cb.codewords[j][m];
            if (static_cast<int>(cw.size()) != cb.R)
                throw CodebookError("codebook: user " + std::to_string(j) + " symbol " +
                                    std::to_string(m) + " length != R");
            for (int r = 0; r < cb.R; ++r) {
                if (!cb.signature[r][j] && std::abs(cw[r]) != 0.0)
                    throw CodebookError("codebook: sparsity violation at user " +
                                        std::to_string(j) + " symbol " + std::to_string(m) +
                                        " resource " + std::to_string(r));
                energy += std::norm(cw[r]);
            }
        }
        energy /= cb.M;
        if (std::abs(energy - 1.0) > 1e-6)
            throw CodebookError("codebook: user " + std::to_string(j) +
                                " average codeword energy " + std::to_string(energy) +
                                " != 1");
    }
}

Codebook load_codebook(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw CodebookError("codebook: cannot open " + path);

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw CodebookError("codebook: parse failure in " + path + ": " + e.what());
    }

    Codebook cb;
    try {
        cb.J = doc.at("J").get<int>();
        cb.R = doc.at("R").get<int>();
        cb.M = doc.at("M").get<int>();
        cb.b = 0;
        while ((1 << cb.b) < cb.M)
            ++cb.b;

        for (const auto& row : doc.at("signature")) {
            std::vector<std::uint8_t> sig_row;
            for (const auto& v : row)
                sig_row.push_back(static_cast<std::uint8_t>(v.get<int>() != 0));
            cb.signature.push_back(std::move(sig_row));
        }

        for (const auto& user : doc.at("codewords")) {
            std::vector<std::vector<cplx>> cws;
            for (const auto& cw : user) {
                std::vector<cplx> vec;
                for (const auto& entry : cw)
                    vec.emplace_back(entry.at(0).get<double>(), entry.at(1).get<double>());
                cws.push_back(std::move(vec));
            }
            cb.codewords.push_back(std::move(cws));
        }
    } catch (const nlohmann::json::exception& e) {
        throw CodebookError("codebook: malformed structure in " + path + ": " + e.what());
    }

    validate_codebook(cb);
    cb.build_adjacency();
    return cb;
}

std::span<const cplx> map_bits(const Codebook& cb, int j, std::span<const std::uint8_t> bits)
{
    if (static_cast<int>(bits.size()) != cb.b)
        throw CodebookError("map_bits: expected " + std::to_string(cb.b) + " bits, got " +
                            std::to_string(bits.size()));
    return cb.codewords[j][bits_to_symbol(bits)];
}

std::vector<double> marginalize(const Codebook& cb, std::span<const double> symbol_probs)
{
    double total = 0.0;
    for (double p : symbol_probs)
        total += p;
    if (!(total > 0.0))
        throw CodebookError("marginalize: all-zero symbol probability vector");

    std::vector<double> llrs(cb.b);
    for (int i = 0; i < cb.b; ++i) {
        double p0 = 0.0, p1 = 0.0;
        for (int m = 0; m < cb.M; ++m)
            (symbol_bit(m, cb.b, i) ? p1 : p0) += symbol_probs[m];
        double l;
        if (p1 <= 0.0)
            l = kLlrMax;
        else if (p0 <= 0.0)
            l = -kLlrMax;
        else
            l = std::log(p0 / p1);
        llrs[i] = clip_llr(l);
    }
    return llrs;
}

std::vector<double> inverse_marginalize(const Codebook& cb, std::span<const double> llrs)
{
    std::vector<double> probs(cb.M, 1.0);
    // p_m = prod_i P(bit_i = bit_i(m)); stay in probability domain since b is
    // small and the factors are already saturated by the LLR clip.
    for (int i = 0; i < cb.b; ++i) {
        double p0 = prob_bit0(llrs[i]);
        for (int m = 0; m < cb.M; ++m)
            probs[m] *= symbol_bit(m, cb.b, i) ? (1.0 - p0) : p0;
    }
    double total = 0.0;
    for (double p : probs)
        total += p;
    if (total > 0.0) {
        for (double& p : probs)
            p /= total;
    } else {
        for (double& p : probs)
            p = 1.0 / cb.M;
    }
    return probs;
}

} // namespace ncksim
