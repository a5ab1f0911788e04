#include "tcyl/manifest.hpp"

#include <openssl/evp.h>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <set>
#include <sstream>

#include "tcyl/errors.hpp"

namespace tcyl {

namespace {

using boost::property_tree::ptree;

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw FormatError("manifest: bad value for " + key + ": '" + raw + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "true") return true;
  if (s == "false") return false;
  throw FormatError("manifest: " + key + " must be true or false");
}

int parse_int(const std::string& key, const std::string& raw) { return parse_number<int>(key, raw); }

class Section {
 public:
  Section(const ptree& tree, std::string name) : name_(std::move(name)) {
    if (const auto child = tree.get_child_optional(name_)) {
      for (const auto& [k, v] : *child) {
        if (!v.empty()) throw FormatError("manifest: nested keys are not supported in [" + name_ + "]");
        values_.emplace_back(k, v.data());
      }
    }
  }

  template <class F>
  void take(const std::string& key, F&& apply) {
    for (auto it = values_.begin(); it != values_.end(); ++it) {
      if (it->first == key) {
        apply(name_ + "." + key, it->second);
        values_.erase(it);
        return;
      }
    }
  }

  void finish() const {
    if (!values_.empty()) throw FormatError("manifest: unknown key " + name_ + "." + values_.front().first);
  }

 private:
  std::string name_;
  std::vector<std::pair<std::string, std::string>> values_;
};

std::string bool_text(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw NumericalError("sha256: digest failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

std::string RunManifest::canonical_body() const { return serialize(false); }

std::string RunManifest::serialize(bool include_dir) const {
  std::ostringstream os;
  os << "# thermal-cylinder run manifest\n";
  os << "[model]\n";
  os << "mass = " << shortest(model.mass) << "\n";
  os << "beta = " << shortest(model.beta) << "\n";
  os << "circumference = " << shortest(model.circumference) << "\n";
  os << "P = [";
  if (model.poly.is_zero()) {
    os << "0";
  } else {
    for (std::size_t j = 0; j < model.poly.coeffs().size(); ++j) {
      os << (j ? ", " : "") << shortest(model.poly.coeffs()[j]);
    }
  }
  os << "]\n[lattice]\n";
  os << "n_t = " << n_t << "\nn_x = " << n_x << "\n";
  os << "[mc]\n";
  os << "seed = " << mc.seed << "\n";
  os << "n_therm = " << mc.n_therm << "\n";
  os << "n_sweeps = " << mc.n_sweeps << "\n";
  os << "meas_interval = " << mc.meas_interval << "\n";
  os << "step_width = " << shortest(mc.step_width) << "\n";
  os << "n_chains = " << mc.n_chains << "\n";
  os << "checkerboard = " << bool_text(mc.checkerboard) << "\n";
  os << "auto_tune = " << bool_text(mc.auto_tune) << "\n";
  os << "[checks]\n";
  os << "enabled = ";
  for (std::size_t i = 0; i < checks.size(); ++i) os << (i ? ", " : "") << checks[i];
  os << "\n[oracle]\n";
  os << "k_max = " << oracle.k_max << "\n";
  os << "n_max = " << oracle.n_max << "\n";
  os << "smearing = " << oracle.smearing << "\n";
  os << "y = " << shortest(oracle.y) << "\n";
  os << "t_points = " << oracle.t_points << "\n";
  os << "momentum_scale = " << shortest(oracle.momentum_scale) << "\n";
  os << "[output]\n";
  if (include_dir) os << "dir = " << output_dir << "\n";
  os << "sample_stride = " << sample_stride << "\n";
  os << "[meta]\n";
  os << "code_version = " << code_version << "\n";
  return os.str();
}

std::string RunManifest::compute_hash() const { return sha256_hex(canonical_body()); }

std::string RunManifest::to_text() const {
  return serialize(true) + "manifest_hash = " + manifest_hash + "\n";
}

void RunManifest::finalize() {
  model.validate();
  lattice().validate();
  mc.validate();
  for (const auto& c : checks) {
    if (std::find(kKnownChecks.begin(), kKnownChecks.end(), c) == kKnownChecks.end()) {
      throw InvalidParameter("manifest: unknown check '" + c + "'");
    }
  }
  if (oracle.k_max < 0 || oracle.n_max < 1 || oracle.smearing < 0 || oracle.smearing > oracle.k_max ||
      !(oracle.y > 0.0) || oracle.t_points < 1 || !std::isfinite(oracle.momentum_scale)) {
    throw InvalidParameter("manifest: invalid [oracle] settings");
  }
  if (sample_stride < 0) throw InvalidParameter("manifest: sample_stride must be non-negative");
  if (output_dir.empty()) throw InvalidParameter("manifest: output dir must not be empty");
  manifest_hash = compute_hash();
}

RunManifest parse_manifest(const std::string& text) {
  ptree tree;
  std::istringstream is(text);
  try {
    boost::property_tree::read_ini(is, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw FormatError(std::string("manifest: ") + e.what());
  }
  static const std::set<std::string> sections = {"model", "lattice", "mc", "checks", "oracle", "output", "meta"};
  for (const auto& [k, v] : tree) {
    if (!sections.count(k) || v.empty()) throw FormatError("manifest: unknown section or top-level key '" + k + "'");
  }

  RunManifest m;
  std::string stored_hash;
  const auto dbl = [](double& out) { return [&out](const std::string& k, const std::string& v) { out = parse_number<double>(k, v); }; };
  const auto integer = [](int& out) { return [&out](const std::string& k, const std::string& v) { out = parse_int(k, v); }; };
  const auto boolean = [](bool& out) { return [&out](const std::string& k, const std::string& v) { out = parse_bool(k, v); }; };

  Section model(tree, "model");
  model.take("mass", dbl(m.model.mass));
  model.take("beta", dbl(m.model.beta));
  model.take("circumference", dbl(m.model.circumference));
  model.take("P", [&](const std::string& k, const std::string& v) {
    std::string list = trim(v);
    if (list.size() < 2 || list.front() != '[' || list.back() != ']') {
      throw FormatError("manifest: " + k + " must be a bracketed list [a0, a1, ...]");
    }
    std::vector<double> c;
    for (const auto& item : split_list(list.substr(1, list.size() - 2))) c.push_back(parse_number<double>(k, item));
    m.model.poly = Polynomial(std::move(c));
  });
  model.finish();

  Section lattice(tree, "lattice");
  lattice.take("n_t", integer(m.n_t));
  lattice.take("n_x", integer(m.n_x));
  lattice.finish();

  Section mc(tree, "mc");
  mc.take("seed", [&](const std::string& k, const std::string& v) { m.mc.seed = parse_number<std::uint64_t>(k, v); });
  mc.take("n_therm", integer(m.mc.n_therm));
  mc.take("n_sweeps", integer(m.mc.n_sweeps));
  mc.take("meas_interval", integer(m.mc.meas_interval));
  mc.take("step_width", dbl(m.mc.step_width));
  mc.take("n_chains", integer(m.mc.n_chains));
  mc.take("checkerboard", boolean(m.mc.checkerboard));
  mc.take("auto_tune", boolean(m.mc.auto_tune));
  mc.finish();

  Section checks(tree, "checks");
  checks.take("enabled", [&](const std::string&, const std::string& v) { m.checks = split_list(v); });
  checks.finish();

  Section oracle(tree, "oracle");
  oracle.take("k_max", integer(m.oracle.k_max));
  oracle.take("n_max", integer(m.oracle.n_max));
  oracle.take("smearing", integer(m.oracle.smearing));
  oracle.take("y", dbl(m.oracle.y));
  oracle.take("t_points", integer(m.oracle.t_points));
  oracle.take("momentum_scale", dbl(m.oracle.momentum_scale));
  oracle.finish();

  Section output(tree, "output");
  output.take("dir", [&](const std::string&, const std::string& v) { m.output_dir = trim(v); });
  output.take("sample_stride", integer(m.sample_stride));
  output.finish();

  Section meta(tree, "meta");
  meta.take("code_version", [&](const std::string&, const std::string& v) { m.code_version = trim(v); });
  meta.take("manifest_hash", [&](const std::string&, const std::string& v) { stored_hash = trim(v); });
  meta.finish();

  m.finalize();
  if (!stored_hash.empty() && stored_hash != m.manifest_hash) {
    throw FormatError("manifest: stored hash " + stored_hash + " does not match content (" + m.manifest_hash +
                      "); refusing to run");
  }
  return m;
}

RunManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("manifest: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str());
}

bool all_pass(const std::vector<CheckReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.passed(); });
}

std::string verdicts_json(const std::string& manifest_hash, std::uint64_t seed,
                          const std::vector<CheckReport>& reports) {
  nlohmann::ordered_json j;
  j["manifest_hash"] = manifest_hash;
  j["seed"] = seed;
  j["all_pass"] = all_pass(reports);
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json c;
    c["name"] = r.name;
    c["verdict"] = to_string(r.verdict);
    c["statistic"] = r.statistic;
    c["threshold"] = r.threshold;
    nlohmann::ordered_json values = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.values) values[k] = v;
    c["values"] = values;
    c["message"] = r.message;
    arr.push_back(c);
  }
  j["checks"] = arr;
  return j.dump(2) + "\n";
}

std::string report_text(const std::string& title, const std::string& manifest_hash,
                        const std::vector<CheckReport>& reports, const std::vector<std::string>& notes) {
  std::ostringstream os;
  os << title << "\n";
  os << "manifest_hash: " << manifest_hash << "\n";
  os << "code_version: " << TCYL_VERSION << "\n\n";
  for (const auto& r : reports) {
    os << std::left << std::setw(24) << r.name << " " << std::setw(13) << to_string(r.verdict)
       << " statistic=" << shortest(r.statistic) << " threshold=" << shortest(r.threshold) << "\n";
    for (const auto& [k, v] : r.values) os << "    " << k << " = " << shortest(v) << "\n";
    if (!r.message.empty()) os << "    " << r.message << "\n";
  }
  if (!notes.empty()) {
    os << "\nnotes:\n";
    for (const auto& n : notes) os << "  - " << n << "\n";
  }
  os << "\noverall: " << (all_pass(reports) ? "PASS" : "FAIL") << "\n";
  return os.str();
}

}  // namespace tcyl
