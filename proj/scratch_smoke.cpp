// Temporary development smoke check (deleted before commit).
#include <cstdio>

#include "qsel/clifford.hpp"
#include "qsel/dense.hpp"
#include "qsel/device.hpp"
#include "qsel/device_io.hpp"
#include "qsel/dsl/format.hpp"
#include "qsel/dsl/interpret.hpp"
#include "qsel/dsl/parser.hpp"
#include "qsel/efficiency.hpp"
#include "qsel/hilbert.hpp"
#include "qsel/protocols/builtin.hpp"
#include "qsel/selector.hpp"
#include "qsel/stats.hpp"

using namespace qsel;

int main() {
  // Bell prep from |00>, flux_only.
  auto bell = protocols::run_bell_prep();
  std::printf("bell success=%.6f entropy=%.9f assert_failed=%d\n",
              bell.success_probability, bell.metrics["entropy_ebit"],
              bell.assert_failed ? 1 : 0);
  if (bell.success_state) {
    for (auto &a : bell.success_state->amplitudes())
      std::printf("  amp %.6f%+.6fi\n", a.real(), a.imag());
  }
  std::printf("frames pair_to_singlet=%s\n",
              bell.frames.count("pair_to_singlet")
                  ? bell.frames["pair_to_singlet"].c_str()
                  : "(none)");

  // Reverse-both keeps the three-term state at 3/4.
  auto both = protocols::run_bell_prep(protocols::BellInitial::zero_zero,
                                       protocols::Reversal::both);
  std::printf("both success=%.6f assert_failed=%d\n",
              both.success_probability, both.assert_failed ? 1 : 0);

  // CNOT entangling input.
  auto cnot_in = QuantumState::from_terms(3, {{1.0, "0+0"}, {1.0, "1+0"}});
  auto cnot = protocols::run_cnot(cnot_in, 1, 2, 3,
                                  protocols::three_qubit_fixture());
  std::printf("cnot success=%.6f fidelity_min=%.12f warnings=%zu\n",
              cnot.success_probability, cnot.metrics["cnot_fidelity_min"],
              cnot.warnings.size());

  // Cluster pipeline.
  auto cluster = protocols::run_cluster4();
  std::printf("cluster success=%.6f premeasure=%.12f paired=%.12f out=%.12f "
              "out_paired=%.12f witness=%d (%.3fs) asserts=%d\n",
              cluster.result.success_probability, cluster.premeasure_fidelity,
              cluster.premeasure_paired_fidelity, cluster.out_fidelity,
              cluster.out_paired_fidelity,
              cluster.standard_form_witness.has_value() ? 1 : 0,
              cluster.witness_seconds, cluster.result.assert_failed ? 1 : 0);
  std::printf("stage quiet probs:");
  for (double p : cluster.stage_quiet_probabilities) std::printf(" %.6f", p);
  std::printf("\n");

  // DSL round trip of the generated bell program.
  const auto prog = protocols::bell_program();
  const std::string text = dsl::format(prog);
  std::printf("--- bell program ---\n%s", text.c_str());
  const auto reparsed = dsl::parse(text);
  std::printf("roundtrip equal=%d\n",
              dsl::structurally_equal(prog, reparsed) ? 1 : 0);

  // Efficiency closed forms.
  GrowthModel gm{0.5, 1.0};
  std::printf("P(16)=%.6f  cost(8)=%.1f  post(10)=%.8f\n",
              joint_success_probability(16, gm), expected_pair_cost(8, gm),
              postselection_probability(10));
  return 0;
}
