#include "dtcns/policy_file.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dtcns/errors.hpp"

namespace dtcns {

namespace {

constexpr int kFormatVersion = 1;

std::string_view activation_name(Activation a) {
  switch (a) {
    case Activation::Identity: return "identity";
    case Activation::Relu: return "relu";
    case Activation::Tanh: return "tanh";
  }
  return "identity";
}

Activation parse_activation(const std::string& s) {
  if (s == "identity") return Activation::Identity;
  if (s == "relu") return Activation::Relu;
  if (s == "tanh") return Activation::Tanh;
  throw ConfigError("policy file: unknown activation '" + s + "'");
}

std::string hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_hex(const std::string& tok) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0') throw ConfigError("policy file: bad number '" + tok + "'");
  return v;
}

void expect(std::istream& in, const std::string& word) {
  std::string got;
  if (!(in >> got) || got != word)
    throw ConfigError("policy file: expected '" + word + "', found '" + got + "'");
}

template <class T>
T read_value(std::istream& in, const char* what) {
  T v{};
  if (!(in >> v)) throw ConfigError(std::string("policy file: cannot read ") + what);
  return v;
}

}  // namespace

std::string_view to_string(PolicyKind kind) {
  return kind == PolicyKind::Cooperative ? "cooperative" : "egocentric";
}

void write_policy(std::ostream& out, const PolicyFile& policy) {
  const auto& net = policy.actor;
  out << "dtcns-policy " << kFormatVersion << '\n'
      << "kind " << to_string(policy.kind) << '\n'
      << "features " << policy.features << '\n'
      << "nodes " << policy.nodes << '\n'
      << "activations " << activation_name(net.hidden_activation()) << ' '
      << activation_name(net.output_activation()) << '\n'
      << "layers " << net.sizes().size();
  for (int s : net.sizes()) out << ' ' << s;
  out << '\n';
  for (std::size_t l = 0; l < net.layers().size(); ++l) {
    const auto& layer = net.layers()[l];
    out << "weight " << l << ' ' << layer.weight.rows() << ' ' << layer.weight.cols() << '\n';
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c)
        out << (c ? " " : "") << hex(layer.weight(r, c));
      out << '\n';
    }
    out << "bias " << l << ' ' << layer.bias.size() << '\n';
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) out << (r ? " " : "") << hex(layer.bias(r));
    out << '\n';
  }
  out << "end\n";
}

PolicyFile read_policy(std::istream& in) {
  PolicyFile p;
  expect(in, "dtcns-policy");
  const int version = read_value<int>(in, "version");
  if (version != kFormatVersion)
    throw ConfigError("policy file: unsupported version " + std::to_string(version));
  expect(in, "kind");
  const auto kind = read_value<std::string>(in, "kind");
  if (kind == "cooperative") p.kind = PolicyKind::Cooperative;
  else if (kind == "egocentric") p.kind = PolicyKind::Egocentric;
  else throw ConfigError("policy file: unknown kind '" + kind + "'");
  expect(in, "features");
  p.features = read_value<int>(in, "features");
  expect(in, "nodes");
  p.nodes = read_value<int>(in, "nodes");
  expect(in, "activations");
  const auto hidden = parse_activation(read_value<std::string>(in, "activation"));
  const auto output = parse_activation(read_value<std::string>(in, "activation"));
  expect(in, "layers");
  const auto count = read_value<std::size_t>(in, "layer count");
  if (count < 2 || count > 64) throw ConfigError("policy file: bad layer count");
  std::vector<int> sizes(count);
  for (auto& s : sizes) s = read_value<int>(in, "layer size");
  p.actor = DenseNet(sizes, hidden, output);
  for (std::size_t l = 0; l + 1 < count; ++l) {
    auto& layer = p.actor.layers()[l];
    expect(in, "weight");
    if (read_value<std::size_t>(in, "layer index") != l ||
        read_value<Eigen::Index>(in, "rows") != layer.weight.rows() ||
        read_value<Eigen::Index>(in, "cols") != layer.weight.cols())
      throw ConfigError("policy file: weight header does not match layer sizes");
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c)
        layer.weight(r, c) = parse_hex(read_value<std::string>(in, "weight"));
    expect(in, "bias");
    if (read_value<std::size_t>(in, "layer index") != l ||
        read_value<Eigen::Index>(in, "rows") != layer.bias.size())
      throw ConfigError("policy file: bias header does not match layer sizes");
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r)
      layer.bias(r) = parse_hex(read_value<std::string>(in, "bias"));
  }
  expect(in, "end");
  return p;
}

void save_policy(const std::string& path, const PolicyFile& policy) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open policy file for writing", path);
  write_policy(out, policy);
  if (!out) throw IoError("failed writing policy file", path);
}

PolicyFile load_policy(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open policy file", path);
  try {
    return read_policy(in);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(e.what()) + " (" + path + ")");
  }
}

}  // namespace dtcns
