#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <type_traits>
#include <vector>

#include "splitfp/core/error.hpp"
#include "splitfp/operators/sequence.hpp"

namespace splitfp {

/// Regularity class of a nonlinear map together with its parameters.
///
/// Parameter slots by tag:
///   Contraction, Demicontractive, StrictlyPseudocontractive: k
///   AsymptoticallyNonexpansive: seq_a = k_n
///   AsymptoticallyQuasiNonexpansive: seq_a = t_n
///   TotalAsymptoticallyNonexpansive: seq_a = v_n, seq_b = mu_n, gauge
///   TotalQuasiAsymptoticallyNonexpansive: seq_a = v_n, seq_b = mu_n, gauge, M, M*
///   TotalAsymStrictPseudocontraction: k, seq_a = mu_n, seq_b = xi_n, gauge = phi
///   Lipschitzian, UniformlyLipschitzian: lipschitz = K
///   StronglyMonotone: eta
struct MapClass {
  enum class Tag {
    Contraction,
    Nonexpansive,
    QuasiNonexpansive,
    FirmlyQuasiNonexpansive,
    Demicontractive,
    StrictlyPseudocontractive,
    Directed,
    AsymptoticallyNonexpansive,
    AsymptoticallyQuasiNonexpansive,
    TotalAsymptoticallyNonexpansive,
    TotalQuasiAsymptoticallyNonexpansive,
    TotalAsymStrictPseudocontraction,
    Lipschitzian,
    UniformlyLipschitzian,
    StronglyMonotone,
  };

  Tag tag = Tag::Nonexpansive;
  double k = 0.0;
  double lipschitz = 1.0;
  double eta = 0.0;
  SequenceSpec seq_a = SequenceSpec::constant(0.0);
  SequenceSpec seq_b = SequenceSpec::constant(0.0);
  Gauge gauge = Gauge::square();
  double gauge_m = 0.0;
  double gauge_m_star = 0.0;

  static MapClass contraction(double k) { return make(Tag::Contraction, [&](MapClass& c) { c.k = k; }); }
  static MapClass nonexpansive() { return make(Tag::Nonexpansive, {}); }
  static MapClass quasi_nonexpansive() { return make(Tag::QuasiNonexpansive, {}); }
  static MapClass firmly_quasi_nonexpansive() { return make(Tag::FirmlyQuasiNonexpansive, {}); }
  static MapClass demicontractive(double k) { return make(Tag::Demicontractive, [&](MapClass& c) { c.k = k; }); }
  static MapClass strictly_pseudocontractive(double k) {
    return make(Tag::StrictlyPseudocontractive, [&](MapClass& c) { c.k = k; });
  }
  static MapClass directed() { return make(Tag::Directed, {}); }
  static MapClass asymptotically_nonexpansive(SequenceSpec kn) {
    return make(Tag::AsymptoticallyNonexpansive, [&](MapClass& c) { c.seq_a = kn; });
  }
  static MapClass asymptotically_quasi_nonexpansive(SequenceSpec tn) {
    return make(Tag::AsymptoticallyQuasiNonexpansive, [&](MapClass& c) { c.seq_a = tn; });
  }
  static MapClass total_asymptotically_nonexpansive(SequenceSpec vn, SequenceSpec mun, Gauge g) {
    return make(Tag::TotalAsymptoticallyNonexpansive, [&](MapClass& c) {
      c.seq_a = vn;
      c.seq_b = mun;
      c.gauge = g;
    });
  }
  static MapClass total_quasi_asymptotically_nonexpansive(SequenceSpec vn, SequenceSpec mun, Gauge g,
                                                          double m = 0.0, double m_star = 1.0) {
    return make(Tag::TotalQuasiAsymptoticallyNonexpansive, [&](MapClass& c) {
      c.seq_a = vn;
      c.seq_b = mun;
      c.gauge = g;
      c.gauge_m = m;
      c.gauge_m_star = m_star;
    });
  }
  static MapClass total_asym_strict_pseudocontraction(double k, SequenceSpec mun, SequenceSpec xin, Gauge phi) {
    return make(Tag::TotalAsymStrictPseudocontraction, [&](MapClass& c) {
      c.k = k;
      c.seq_a = mun;
      c.seq_b = xin;
      c.gauge = phi;
    });
  }
  static MapClass lipschitzian(double kk) { return make(Tag::Lipschitzian, [&](MapClass& c) { c.lipschitz = kk; }); }
  static MapClass uniformly_lipschitzian(double kk) {
    return make(Tag::UniformlyLipschitzian, [&](MapClass& c) { c.lipschitz = kk; });
  }
  static MapClass strongly_monotone(double eta) {
    return make(Tag::StronglyMonotone, [&](MapClass& c) { c.eta = eta; });
  }

  /// Checks the parameter constraints of the definition. Limits of
  /// sequences are screened at n = 10000 (|v_n| small, k_n near 1).
  void validate() const {
    auto need = [&](bool ok, const std::string& why) {
      if (!ok) throw ValidationError(name() + ": " + why);
    };
    auto limit_screen = [&](const SequenceSpec& s, double target, const char* what) {
      need(std::abs(s(kSequenceCheckTerms) - target) <= 1e-2, std::string(what) + " does not approach " +
                                                                   std::to_string(target));
    };
    switch (tag) {
      case Tag::Contraction: need(k > 0.0 && k < 1.0, "k must lie in (0,1)"); break;
      case Tag::Demicontractive:
      case Tag::StrictlyPseudocontractive: need(k >= 0.0 && k < 1.0, "k must lie in [0,1)"); break;
      case Tag::AsymptoticallyNonexpansive:
      case Tag::AsymptoticallyQuasiNonexpansive:
        require_range(seq_a, "k", 1.0, 1e300, true, false);
        limit_screen(seq_a, 1.0, "sequence");
        break;
      case Tag::TotalAsymptoticallyNonexpansive:
      case Tag::TotalQuasiAsymptoticallyNonexpansive:
        require_range(seq_a, "v", 0.0, 1e300, true, false);
        require_range(seq_b, "mu", 0.0, 1e300, true, false);
        limit_screen(seq_a, 0.0, "v_n");
        limit_screen(seq_b, 0.0, "mu_n");
        need(gauge_m >= 0.0 && gauge_m_star >= 0.0, "M, M* must be nonnegative");
        break;
      case Tag::TotalAsymStrictPseudocontraction:
        need(k >= 0.0 && k < 1.0, "k must lie in [0,1)");
        require_range(seq_a, "mu", 0.0, 1e300, true, false);
        require_range(seq_b, "xi", 0.0, 1e300, true, false);
        limit_screen(seq_a, 0.0, "mu_n");
        limit_screen(seq_b, 0.0, "xi_n");
        break;
      case Tag::Lipschitzian:
      case Tag::UniformlyLipschitzian: need(lipschitz > 0.0, "K must be positive"); break;
      case Tag::StronglyMonotone: need(eta > 0.0, "eta must be positive"); break;
      default: break;
    }
  }

  // True when the defining inequality quantifies over Fix(T).
  bool needs_fixed_points() const {
    switch (tag) {
      case Tag::QuasiNonexpansive:
      case Tag::FirmlyQuasiNonexpansive:
      case Tag::Demicontractive:
      case Tag::Directed:
      case Tag::AsymptoticallyQuasiNonexpansive:
      case Tag::TotalQuasiAsymptoticallyNonexpansive: return true;
      default: return false;
    }
  }

  // True when the inequality involves iterate powers T^n.
  bool is_asymptotic() const {
    switch (tag) {
      case Tag::AsymptoticallyNonexpansive:
      case Tag::AsymptoticallyQuasiNonexpansive:
      case Tag::TotalAsymptoticallyNonexpansive:
      case Tag::TotalQuasiAsymptoticallyNonexpansive:
      case Tag::TotalAsymStrictPseudocontraction:
      case Tag::UniformlyLipschitzian: return true;
      default: return false;
    }
  }

  // True when the inequality compares two sample points.
  bool is_pairwise() const { return !needs_fixed_points(); }

  std::string name() const { return tag_name(tag); }

  std::string describe() const {
    switch (tag) {
      case Tag::Contraction:
      case Tag::Demicontractive:
      case Tag::StrictlyPseudocontractive: return name() + "(k=" + std::to_string(k) + ")";
      case Tag::Lipschitzian:
      case Tag::UniformlyLipschitzian: return name() + "(K=" + std::to_string(lipschitz) + ")";
      case Tag::StronglyMonotone: return name() + "(eta=" + std::to_string(eta) + ")";
      case Tag::AsymptoticallyNonexpansive:
      case Tag::AsymptoticallyQuasiNonexpansive: return name() + "(" + seq_a.describe() + ")";
      case Tag::TotalAsymptoticallyNonexpansive:
      case Tag::TotalQuasiAsymptoticallyNonexpansive:
        return name() + "(" + seq_a.describe() + ", " + seq_b.describe() + ", " + gauge.describe() + ")";
      case Tag::TotalAsymStrictPseudocontraction:
        return name() + "(k=" + std::to_string(k) + ", " + seq_a.describe() + ", " + seq_b.describe() + ", " +
               gauge.describe() + ")";
      default: return name();
    }
  }

  static const std::vector<std::pair<std::string, Tag>>& names() {
    static const std::vector<std::pair<std::string, Tag>> n = {
        {"contraction", Tag::Contraction},
        {"nonexpansive", Tag::Nonexpansive},
        {"quasi-nonexpansive", Tag::QuasiNonexpansive},
        {"firmly-quasi-nonexpansive", Tag::FirmlyQuasiNonexpansive},
        {"demicontractive", Tag::Demicontractive},
        {"strictly-pseudocontractive", Tag::StrictlyPseudocontractive},
        {"directed", Tag::Directed},
        {"asymptotically-nonexpansive", Tag::AsymptoticallyNonexpansive},
        {"asymptotically-quasi-nonexpansive", Tag::AsymptoticallyQuasiNonexpansive},
        {"total-asymptotically-nonexpansive", Tag::TotalAsymptoticallyNonexpansive},
        {"total-quasi-asymptotically-nonexpansive", Tag::TotalQuasiAsymptoticallyNonexpansive},
        {"total-asymptotically-strict-pseudocontraction", Tag::TotalAsymStrictPseudocontraction},
        {"lipschitzian", Tag::Lipschitzian},
        {"uniformly-lipschitzian", Tag::UniformlyLipschitzian},
        {"strongly-monotone", Tag::StronglyMonotone},
    };
    return n;
  }

  static std::string tag_name(Tag t) {
    for (const auto& [s, tt] : names()) {
      if (tt == t) return s;
    }
    return "?";
  }

  static Tag parse_tag(const std::string& s) {
    for (const auto& [name, t] : names()) {
      if (name == s) return t;
    }
    throw ValidationError("unknown map class '" + s + "'");
  }

  /// Class with the given tag and the weakest customary parameters: k = 0
  /// (k = 0.5 for contractions), K = 1, eta = 1, constant sequences 1 for
  /// k_n / t_n and 0 for the perturbations, gauge t^2.
  static MapClass with_defaults(Tag t) {
    switch (t) {
      case Tag::Contraction: return contraction(0.5);
      case Tag::Demicontractive: return demicontractive(0.0);
      case Tag::StrictlyPseudocontractive: return strictly_pseudocontractive(0.0);
      case Tag::AsymptoticallyNonexpansive: return asymptotically_nonexpansive(SequenceSpec::constant(1.0));
      case Tag::AsymptoticallyQuasiNonexpansive:
        return asymptotically_quasi_nonexpansive(SequenceSpec::constant(1.0));
      case Tag::TotalAsymptoticallyNonexpansive:
        return total_asymptotically_nonexpansive(SequenceSpec::constant(0.0), SequenceSpec::constant(0.0),
                                                 Gauge::square());
      case Tag::TotalQuasiAsymptoticallyNonexpansive:
        return total_quasi_asymptotically_nonexpansive(SequenceSpec::constant(0.0), SequenceSpec::constant(0.0),
                                                       Gauge::square());
      case Tag::TotalAsymStrictPseudocontraction:
        return total_asym_strict_pseudocontraction(0.0, SequenceSpec::constant(0.0), SequenceSpec::constant(0.0),
                                                   Gauge::square());
      case Tag::Lipschitzian: return lipschitzian(1.0);
      case Tag::UniformlyLipschitzian: return uniformly_lipschitzian(1.0);
      case Tag::StronglyMonotone: return strongly_monotone(1.0);
      default: {
        MapClass c;
        c.tag = t;
        return c;
      }
    }
  }

 private:
  template <typename F>
  static MapClass make(Tag t, F&& set) {
    MapClass c;
    c.tag = t;
    set(c);
    c.validate();
    return c;
  }
  static MapClass make(Tag t, std::nullptr_t) {
    MapClass c;
    c.tag = t;
    return c;
  }
};

}  // namespace splitfp
