#pragma once
// Finite fields F_{p^s} with elements encoded as integers sum c_i p^i.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

namespace ff {

bool is_prime(long n);
std::vector<long> prime_factors(long n);

// Polynomials over F_p, coefficient vectors little-endian.
using Poly = std::vector<int>;

struct Field {
    int p = 0, s = 0;
    uint32_t q = 0;
    Poly modulus;                 // c_0..c_{s-1},1
    uint32_t gen = 0;             // primitive element (code)

    std::vector<uint32_t> exp_;   // exp_[i] = g^i, i < q-1
    std::vector<uint32_t> log_;   // log_[x], x != 0
    std::vector<uint32_t> zech_;  // g^zech[i] = 1 + g^i; q-1 marks zero
    std::vector<uint8_t> tr_;     // absolute trace into [0,p)

    uint32_t order() const { return q - 1; }
    uint32_t add(uint32_t a, uint32_t b) const;
    uint32_t sub(uint32_t a, uint32_t b) const;
    uint32_t neg(uint32_t a) const;
    uint32_t mul(uint32_t a, uint32_t b) const;
    uint32_t inv(uint32_t a) const;
    uint32_t div(uint32_t a, uint32_t b) const { return mul(a, inv(b)); }
    uint32_t pow(uint32_t a, uint64_t e) const;
    uint32_t frob(uint32_t a) const { return pow(a, (uint64_t)p); }
    uint32_t from_int(long c) const;   // image of an integer in the prime field
    int trace(uint32_t a) const { return tr_[a]; }
    // Norm down to the subfield of degree t | s; result is an element of this field.
    uint32_t norm(uint32_t a, int t) const;
    // Quadratic character, q odd: +1, -1, or 0 at 0.
    int quad(uint32_t a) const;
    std::string describe() const;
};

using FieldPtr = std::shared_ptr<const Field>;

// Least monic irreducible in the order of sum c_i p^i when modulus is empty.
FieldPtr make_field(int p, int s, const Poly& modulus = {});

bool poly_irreducible(const Poly& f, int p);

// Lightweight value wrapper; the field must outlive the element.
struct FqElem {
    const Field* F = nullptr;
    uint32_t v = 0;

    FqElem() = default;
    FqElem(const Field* f, uint32_t code) : F(f), v(code) {}
    std::vector<int> coeffs() const;
    bool is_zero() const { return v == 0; }
    FqElem operator+(FqElem b) const { return {F, F->add(v, b.v)}; }
    FqElem operator-(FqElem b) const { return {F, F->sub(v, b.v)}; }
    FqElem operator-() const { return {F, F->neg(v)}; }
    FqElem operator*(FqElem b) const { return {F, F->mul(v, b.v)}; }
    FqElem operator/(FqElem b) const { return {F, F->div(v, b.v)}; }
    FqElem pow(uint64_t e) const { return {F, F->pow(v, e)}; }
    bool operator==(const FqElem& o) const { return F == o.F && v == o.v; }
    bool operator!=(const FqElem& o) const { return !(*this == o); }
};

FqElem trace(FqElem x);
FqElem norm(FqElem x, int t);

// Deterministic order: g^0, g^1, ..., g^{q-2}.
std::vector<FqElem> units(const Field& F);

int teichmuller_digit(FqElem x);

// Code map F_small -> F_big sending a generator of the small polynomial basis
// to the least root of the small modulus in the big field.
std::vector<uint32_t> embedding(const Field& small, const Field& big);

void to_json(nlohmann::json& j, const Field& F);

}  // namespace ff
