#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "clusterkit/chd/attr.hpp"
#include "clusterkit/chd/leach.hpp"
#include "clusterkit/chd/maxmind.hpp"
#include "clusterkit/chd/prob.hpp"
#include "clusterkit/chd/tcca.hpp"
#include "clusterkit/it/maxmind.hpp"
#include "clusterkit/it/moca.hpp"
#include "clusterkit/it/norm.hpp"
#include "clusterkit/jd/bfs.hpp"
#include "clusterkit/jd/dfs.hpp"
#include "clusterkit/jd/maxmind.hpp"
#include "clusterkit/jd/moca.hpp"

namespace clusterkit {

inline std::unique_ptr<ChdModule> make_chd(const std::string& name) {
  if (name == "prob") return std::make_unique<ProbChd>();
  if (name == "attr") return std::make_unique<AttrChd>();
  if (name == "leach") return std::make_unique<LeachChd>();
  if (name == "tcca") return std::make_unique<TccaChd>();
  if (name == "maxmind") return std::make_unique<MaxMinDChd>();
  throw std::invalid_argument("unknown chd module: " + name);
}

inline std::unique_ptr<JdModule> make_jd(const std::string& name) {
  if (name == "bfs-lca") return std::make_unique<LcaJd>();
  if (name == "bfs-leach") return std::make_unique<LeachJd>();
  if (name == "bfs-tcca") return std::make_unique<TccaJd>();
  if (name == "dfs") return std::make_unique<DfsJd>();
  if (name == "moca") return std::make_unique<MocaJd>();
  if (name == "maxmind") return std::make_unique<MaxMindJd>();
  throw std::invalid_argument("unknown jd module: " + name);
}

inline std::unique_ptr<ItModule> make_it(const std::string& name) {
  if (name == "norm") return std::make_unique<NormIt>();
  if (name == "moca") return std::make_unique<MocaIt>();
  if (name == "maxmind") return std::make_unique<MaxMindIt>();
  throw std::invalid_argument("unknown it module: " + name);
}

inline Composition make_custom(const std::string& chd, const std::string& jd,
                               const std::string& it, ChdParams params) {
  Composition c;
  c.name = chd + "+" + jd + "+" + it;
  c.chd = make_chd(chd);
  c.jd = make_jd(jd);
  c.it = make_it(it);
  c.params = params;
  bool maxmin = chd == "maxmind" || jd == "maxmind";
  c.radius = maxmin ? std::max(params.k, params.d) : std::max(params.k, 1u);
  return c;
}

// The five shipped compositions.
inline Composition make_composition(const std::string& algo, ChdParams params) {
  if (algo == "lca") {
    auto c = make_custom("attr", "bfs-lca", "norm", params);
    c.name = "lca";
    return c;
  }
  if (algo == "leach") {
    params.k = 1;
    auto c = make_custom("leach", "bfs-leach", "norm", params);
    c.name = "leach";
    return c;
  }
  if (algo == "tcca") {
    auto c = make_custom("tcca", "bfs-tcca", "norm", params);
    c.name = "tcca";
    return c;
  }
  if (algo == "moca") {
    auto c = make_custom("prob", "moca", "moca", params);
    c.name = "moca";
    return c;
  }
  if (algo == "maxmind") {
    params.k = 1;
    auto c = make_custom("maxmind", "maxmind", "maxmind", params);
    c.name = "maxmind";
    return c;
  }
  throw std::invalid_argument("unknown algorithm: " + algo);
}

}  // namespace clusterkit
