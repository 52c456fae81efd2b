#pragma once

#include <string>
#include <vector>

#include "logicad/app/config.hpp"

namespace logicad::app {

struct Ablation {
  std::string name;
  bool gcot, roi, format_embedding, logic_reasoner;

  RunConfig apply(RunConfig c) const {
    c.gcot = gcot;
    c.roi_enabled = roi;
    c.format_embedding = format_embedding;
    c.logic_reasoner = logic_reasoner;
    return c;
  }
};

// Module switches evaluated by the fixture suite.
inline std::vector<Ablation> ablation_matrix() {
  return {
      {"full", true, true, true, true},
      {"no_gcot", false, true, true, true},
      {"no_roi", true, false, true, true},
      {"no_gcot_no_roi", false, false, true, true},
      {"embedding_only", true, true, true, false},
      {"reasoner_only", true, true, false, true},
  };
}

}  // namespace logicad::app
