#include "netcon/cert_io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace netcon {

namespace {

constexpr const char* kHeader = "netcon-certificate v1";

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* kind_name(VarKind k) {
  switch (k) {
    case VarKind::P: return "P";
    case VarKind::Alpha: return "alpha";
    case VarKind::Q: return "Q";
    case VarKind::S: return "S";
    case VarKind::R: return "R";
  }
  return "?";
}

VarKind kind_from(const std::string& s, int line) {
  if (s == "P") return VarKind::P;
  if (s == "alpha") return VarKind::Alpha;
  if (s == "Q") return VarKind::Q;
  if (s == "S") return VarKind::S;
  if (s == "R") return VarKind::R;
  throw ConfigError("certificate line " + std::to_string(line) +
                    ": unknown variable kind \"" + s + "\"");
}

std::string next_line(std::istream& is, int& line) {
  std::string s;
  if (!std::getline(is, s))
    throw ConfigError("certificate truncated after line " + std::to_string(line));
  ++line;
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

// "key value" with the exact expected key.
std::string field(std::istream& is, int& line, const std::string& key) {
  std::istringstream ls(next_line(is, line));
  std::string got, rest;
  ls >> got;
  if (got != key)
    throw ConfigError("certificate line " + std::to_string(line) +
                      ": expected \"" + key + "\", got \"" + got + "\"");
  ls >> rest;
  if (!ls || rest.empty())
    throw ConfigError("certificate line " + std::to_string(line) +
                      ": missing value for \"" + key + "\"");
  return rest;
}

double parse_num(const std::string& s, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size())
    throw ConfigError("certificate line " + std::to_string(line) +
                      ": bad number \"" + s + "\"");
  return v;
}

}  // namespace

void write_certificate(std::ostream& os, const Certificate& cert) {
  os << kHeader << "\n";
  os << "mode "
     << (cert.mode == CertificateMode::Sublinear ? "sublinear" : "exponential")
     << "\n";
  os << "gamma " << num(cert.gamma) << "\n";
  os << "delta " << num(cert.delta) << "\n";
  char fp[24];
  std::snprintf(fp, sizeof fp, "%016llx",
                static_cast<unsigned long long>(cert.fingerprint));
  os << "fingerprint " << fp << "\n";
  os << "min_margin " << num(cert.min_margin) << "\n";
  os << "margins " << cert.margins.size() << "\n";
  for (double m : cert.margins) os << num(m) << "\n";
  os << "variables " << cert.witness.values.size() << "\n";
  for (const auto& [id, value] : cert.witness.values)
    os << kind_name(id.kind) << " " << id.agent << " " << id.a << " " << id.b
       << " " << num(value) << "\n";
}

Certificate read_certificate(std::istream& is) {
  int line = 0;
  if (next_line(is, line) != kHeader)
    throw ConfigError("not a netcon certificate (bad header)");

  Certificate cert;
  std::string mode = field(is, line, "mode");
  if (mode == "sublinear") {
    cert.mode = CertificateMode::Sublinear;
  } else if (mode == "exponential") {
    cert.mode = CertificateMode::Exponential;
  } else {
    throw ConfigError("certificate line " + std::to_string(line) +
                      ": unknown mode \"" + mode + "\"");
  }
  cert.gamma = parse_num(field(is, line, "gamma"), line);
  cert.delta = parse_num(field(is, line, "delta"), line);
  std::string fp = field(is, line, "fingerprint");
  cert.fingerprint = 0;
  if (fp.size() != 16)
    throw ConfigError("certificate line " + std::to_string(line) +
                      ": fingerprint must be 16 hex digits");
  for (char c : fp) {
    int d = c >= '0' && c <= '9'   ? c - '0'
            : c >= 'a' && c <= 'f' ? c - 'a' + 10
            : c >= 'A' && c <= 'F' ? c - 'A' + 10
                                   : -1;
    if (d < 0)
      throw ConfigError("certificate line " + std::to_string(line) +
                        ": fingerprint must be 16 hex digits");
    cert.fingerprint = (cert.fingerprint << 4) | std::uint64_t(d);
  }
  cert.min_margin = parse_num(field(is, line, "min_margin"), line);

  long margin_count = long(parse_num(field(is, line, "margins"), line));
  if (margin_count < 0 || margin_count > 1000000)
    throw ConfigError("certificate: implausible margin count");
  for (long i = 0; i < margin_count; ++i)
    cert.margins.push_back(parse_num(next_line(is, line), line));

  long var_count = long(parse_num(field(is, line, "variables"), line));
  if (var_count < 1 || var_count > 1000000)
    throw ConfigError("certificate: implausible variable count");
  for (long i = 0; i < var_count; ++i) {
    std::istringstream ls(next_line(is, line));
    std::string kind, value;
    VarId id;
    ls >> kind >> id.agent >> id.a >> id.b >> value;
    if (!ls || value.empty())
      throw ConfigError("certificate line " + std::to_string(line) +
                        ": expected \"kind agent a b value\"");
    id.kind = kind_from(kind, line);
    if (!cert.witness.values.emplace(id, parse_num(value, line)).second)
      throw ConfigError("certificate line " + std::to_string(line) +
                        ": duplicate variable " + to_string(id));
  }
  return cert;
}

}  // namespace netcon
