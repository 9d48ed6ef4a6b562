#pragma once

// The quotient S_k^! / D^{k-1} M_{2-k}^! on Gamma_0(9), realized with
// representatives whose poles sit only at the cusp infinity.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mockpadic/etaforms.hpp"

namespace mockpadic {

/// A series together with lower bounds on its orders at the cusps other
/// than infinity.
struct CertifiedSeries {
    LaurentSeries series;
    int weight = 0;
    long level = 9;
    OrderCertificate orders;

    static CertifiedSeries from_eta(const EtaQuotient& e, long prec);
    static CertifiedSeries from_basis(const FormSpaceBasis& basis, std::size_t index);
    /// Orders at every finite cusp are known and at least `bound`.
    bool finite_orders_at_least(long bound) const;
};

/// D^{k-1} of a weight 2-k form. Holomorphic finite cusps become cusps of
/// order at least 1 since the derivative kills constant terms.
CertifiedSeries derivative_image(const CertifiedSeries& phi, int k);

struct PairingValue {
    BigRational value;
    /// Cusp denominators with nonzero contributions.
    std::vector<long> cusps;
    /// Signed contribution a_phi(n) a_psi(-n) / n^{k-1} per exponent n.
    std::map<long, BigRational> contributions;
};

/// sum_{n != 0} a_phi(n) a_psi(-n) / n^{k-1}. Both inputs need poles only at
/// infinity, and one of them must vanish at every finite cusp.
PairingValue pairing(const CertifiedSeries& phi, const CertifiedSeries& psi, int k);

/// One term coeff * series of an exact combination.
struct Constituent {
    std::string label;
    BigRational coeff;
    LaurentSeries series;
    OrderCertificate orders;
};

struct CuspFormCertificate {
    LaurentSeries combination;
    OrderCertificate orders;
    long pole_order = 0;
    std::vector<std::string> labels;
};

/// Certifies that the combination lies in S_k^! with poles only at infinity:
/// vanishing constant term at infinity and orders >= 1 at every other cusp.
/// Throws CertificationError otherwise, including the order-0 case.
CuspFormCertificate certify_weakly_holomorphic_cusp_form(const std::vector<Constituent>& f, long level = 9);

/// Phi = sum_j c_j g t^j with <Phi, g> = 1, zero constant term and pole order m.
struct CuspFormClass {
    long level = 9;
    int weight = 4;
    long pole_order = 0;
    LaurentSeries phi;
    OrderCertificate orders;
    BigRational pairing_with_g;
    /// Signed pairing contributions by exponent.
    std::map<long, BigRational> normalization;
    /// Coefficients on the weight-4 basis elements with leading exponents -m .. 0.
    std::map<long, BigRational> basis_coefficients;
    /// c_j for j = 0 .. m + 1.
    std::vector<BigRational> g_t_coefficients;

    std::string id() const { return "Phi_" + std::to_string(pole_order); }
    /// Re-expands sum c_j g t^j to the requested precision.
    LaurentSeries expand(long prec) const;
};

/// key=value lines (level, weight, pole_order, pairing_with_g, g_t, basis,
/// normalization, orders, orders_exact), then a line "series" followed by
/// the series text format.
void write_representative(std::ostream& out, const CuspFormClass& phi);
/// Inverse of write_representative; throws InvalidInput on malformed text.
CuspFormClass read_representative(std::istream& in);

/// g t^j for j = 0 .. max_power, each known to `prec`.
std::vector<LaurentSeries> g_t_products(long max_power, long prec);

/// Throws InvalidInput for m < 1 and Obstruction (suggesting m + 1) when no
/// combination meets the constraints.
CuspFormClass construct_representative(long m, long prec = 0);

struct Reduction {
    LaurentSeries result;
    /// Leading exponent e of a weight 2-k basis element -> multiple of D^{k-1}(b_e) removed.
    std::map<long, BigRational> removed;
};

/// Subtracts D^{k-1} images of the weight 2-k basis until the pole order is
/// at most 1. Throws PrecisionError when the basis is too shallow.
Reduction reduce_canonical(const LaurentSeries& f, const FormSpaceBasis& basis_2mk, int k = 4);

struct HeckeWitness {
    bool passed = false;
    long l = 0;
    BigRational a_g_l;
    /// reduce_canonical(T_l Phi - a_g(l) Phi) = g_multiple * g when passed.
    BigRational g_multiple;
    Reduction reduction;
    std::string detail;
};

/// Smallest remainder precision accepted by the Hecke check.
inline constexpr long kHeckeMinPrec = 24;
/// Precision of Phi needed for hecke_class_check at l.
long hecke_required_prec(long l);

HeckeWitness hecke_class_check(const CuspFormClass& phi, long l, const OperatorContext& ctx,
                               const FormSpaceBasis& basis_2mk);

} // namespace mockpadic
