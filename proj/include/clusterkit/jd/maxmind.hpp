#pragma once

#include "clusterkit/core.hpp"

namespace clusterkit {

// MaxMin clusters self-assemble during the flood phases; no join protocol
// runs afterwards, so this module only names the slot.
class MaxMindJd : public JdModule {
 public:
  const char* name() const override { return "maxmind"; }
};

}  // namespace clusterkit
