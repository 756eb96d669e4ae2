#pragma once

#include <iosfwd>
#include <string>

#include "dtcns/dense_net.hpp"
#include "dtcns/policy.hpp"

namespace dtcns {

/// A trained actor plus the metadata needed to use it.
///
/// On disk (text, version 1):
///
///     dtcns-policy 1
///     kind cooperative|egocentric
///     features <F>
///     nodes <N>
///     activations relu|tanh|identity relu|tanh|identity
///     layers <count> <size_0> ... <size_count-1>
///     weight <layer> <rows> <cols>
///     <rows lines of cols hexfloats>
///     bias <layer> <rows>
///     <one line of rows hexfloats>
///     ...
///     end
///
/// Values are written as C hexfloats so a load/save round trip is bit-exact.
struct PolicyFile {
  PolicyKind kind = PolicyKind::Cooperative;
  int features = kNumFeatures;
  int nodes = 0;
  DenseNet actor;

  bool operator==(const PolicyFile&) const = default;
};

void write_policy(std::ostream& out, const PolicyFile& policy);
PolicyFile read_policy(std::istream& in);
void save_policy(const std::string& path, const PolicyFile& policy);
PolicyFile load_policy(const std::string& path);

std::string_view to_string(PolicyKind kind);

}  // namespace dtcns
