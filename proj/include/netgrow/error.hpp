#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace netgrow {

enum class errc {
  invalid_graph,
  duplicate_edge,
  self_loop_edge,
  node_count_mismatch,
  not_connected,
  invalid_parameter,
  non_differentiable,
  unsupported_measure,
  combinatorial_blowup,
  axiom_violation,
  unstable_step_size,
  parse_error,
};

constexpr std::string_view to_string(errc code) noexcept {
  switch (code) {
    case errc::invalid_graph: return "InvalidGraph";
    case errc::duplicate_edge: return "DuplicateEdge";
    case errc::self_loop_edge: return "SelfLoopEdge";
    case errc::node_count_mismatch: return "NodeCountMismatch";
    case errc::not_connected: return "NotConnected";
    case errc::invalid_parameter: return "InvalidParameter";
    case errc::non_differentiable: return "NonDifferentiable";
    case errc::unsupported_measure: return "UnsupportedMeasure";
    case errc::combinatorial_blowup: return "CombinatorialBlowup";
    case errc::axiom_violation: return "AxiomViolation";
    case errc::unstable_step_size: return "UnstableStepSize";
    case errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

/// Single exception type for the library; inspect code() to dispatch.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace netgrow
