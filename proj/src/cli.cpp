#include "modgrid/cli.hpp"

#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "modgrid/errors.hpp"
#include "modgrid/genfun.hpp"
#include "modgrid/grid.hpp"
#include "modgrid/pairing.hpp"
#include "modgrid/serialize.hpp"
#include "modgrid/version.hpp"

namespace modgrid {

namespace {

std::string fnv1a64_hex(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream o;
  o << std::hex << std::setw(16) << std::setfill('0') << h;
  return o.str();
}

std::string qexpansion_csv(const QExpansion& a) {
  std::ostringstream o;
  o << "exponent,coefficient\n";
  for (const auto& [e, c] : a.terms())
    o << rational_to_string(to_rational(e) / to_rational(a.den())) << ","
      << rational_to_string(c) << "\n";
  return o.str();
}

std::string family_csv(const BasisFamily& fam) {
  std::ostringstream o;
  o << "index,exponent,coefficient\n";
  for (const auto& [idx, q] : fam.members)
    for (const auto& [e, c] : q.terms())
      o << idx << "," << rational_to_string(to_rational(e) / to_rational(q.den()))
        << "," << rational_to_string(c) << "\n";
  return o.str();
}

std::string family_pretty(const BasisFamily& fam) {
  std::ostringstream o;
  const char letter = fam.kind == FamilyKind::F ? 'f' : 'g';
  for (const auto& [idx, q] : fam.members)
    o << letter << "_" << idx << " = " << q.to_display_string(12) << "\n";
  return o.str();
}

std::string pad_table(const std::vector<std::vector<std::string>>& rows) {
  std::size_t cols = 0;
  for (const auto& r : rows) cols = std::max(cols, r.size());
  std::vector<std::size_t> width(cols, 0);
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.size(); ++i)
      width[i] = std::max(width[i], r[i].size());
  std::ostringstream o;
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i)
      o << (i ? "  " : "") << std::setw(static_cast<int>(width[i])) << r[i];
    o << "\n";
  }
  return o.str();
}

std::string grid_pretty(const ModularGrid& grid) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"m\\n"};
  for (const auto& [n, unused] : grid.g_family.members)
    header.push_back(std::to_string(n));
  rows.push_back(std::move(header));
  for (const auto& [m, unused_f] : grid.f_family.members) {
    std::vector<std::string> row{std::to_string(m)};
    for (const auto& [n, unused_g] : grid.g_family.members)
      row.push_back(rational_to_string(grid.a_matrix.at({m, n})));
    rows.push_back(std::move(row));
  }
  return pad_table(rows);
}

long long default_or(long long value, long long fallback) {
  return value < 0 ? fallback : value;
}

// Window columns must fit under the precision the families will carry;
// refuse early with a precise message.
void require_prec_covers(long long prec, long long needed) {
  if (prec >= 0 && prec < needed)
    throw PrecisionTooLow("requested precision " + std::to_string(prec) +
                          " does not cover the window (needs at least " +
                          std::to_string(needed) + ")");
}

std::string resolve_cache_dir(const JobConfig& job) {
  if (!job.cache_dir.empty()) return job.cache_dir;
  if (const char* env = std::getenv("MODGRID_CACHE"); env && *env) return env;
  return ".modgrid-cache";
}

void emit_json(std::ostream& out, const nlohmann::ordered_json& doc) {
  out << doc.dump(2) << "\n";
}

int run_basis(const JobConfig& job, std::ostream& out) {
  const SpaceConfig& cfg = space_config(job.space);
  FamilyKind kind = family_kind_from_string(job.kind);
  long long max_index = default_or(job.index, 8);
  Rational prec = to_rational(default_or(job.prec, max_index + 9));
  BasisFamily fam =
      cached_basis(cfg, kind, max_index, prec, resolve_cache_dir(job));
  if (job.format == "json")
    emit_json(out, to_json(fam));
  else if (job.format == "csv")
    out << family_csv(fam);
  else
    out << family_pretty(fam);
  return 0;
}

int run_grid(const JobConfig& job, std::ostream& out) {
  const SpaceConfig& cfg = space_config(job.space);
  const SpaceConfig& dual = space_config(cfg.dual_id);
  long long max_m = default_or(job.window_m, 8);
  long long max_n = default_or(job.window_n, max_m);
  require_prec_covers(job.prec, std::max(max_m, max_n) + 1);
  Rational f_prec = to_rational(std::max(default_or(job.prec, 0), max_n + 1));
  Rational g_prec = to_rational(std::max(default_or(job.prec, 0), max_m + 1));
  std::string dir = resolve_cache_dir(job);
  ModularGrid grid = grid_from_families(
      cached_basis(cfg, FamilyKind::F, max_m, f_prec, dir),
      cached_basis(dual, FamilyKind::G, max_n, g_prec, dir));
  if (job.format == "json")
    emit_json(out, grid_to_json(grid));
  else if (job.format == "csv")
    out << grid_to_csv(grid);
  else
    out << grid_pretty(grid);
  return 0;
}

int run_genfun(const JobConfig& job, std::ostream& out) {
  const SpaceConfig& cfg = space_config(job.space);
  long long window_m = default_or(job.window_m, 8);
  long long window_n = default_or(job.window_n, window_m);
  bool verified = false;
  GridGeneratingExpression expr =
      derive_generating_expression(cfg, window_m, window_n, &verified);
  if (!verified)
    throw ResidualNonzero(
        "two-sided verification failed on the requested window");
  if (job.format == "json") {
    emit_json(out, genfun_to_json(expr));
  } else if (job.format == "csv") {
    out << "coefficient,m,n\n";
    for (const auto& [c, m, n] : expr.numerator)
      out << rational_to_string(c) << "," << m << "," << n << "\n";
  } else {
    out << genfun_to_pretty(expr) << "\n";
    out << "verified on window " << window_m << "x" << window_n << "\n";
  }
  return 0;
}

int run_hecke(const JobConfig& job, std::ostream& out) {
  const SpaceConfig& cfg = space_config(job.space);
  FamilyKind kind = family_kind_from_string(job.kind);
  IndexSets idx = index_sets(cfg);
  long long index = default_or(
      job.index, kind == FamilyKind::F ? idx.itilde_min() : idx.jtilde_min());
  long long M = default_or(job.hecke_m, 1);
  Rational prec = to_rational(default_or(job.prec, (std::llabs(index) + 9) * M));
  BasisFamily fam =
      cached_basis(cfg, kind, index, prec, resolve_cache_dir(job));
  auto it = fam.members.find(index);
  if (it == fam.members.end())
    throw IndexMismatch("no family member of index " + std::to_string(index));
  QExpansion result = hecke(it->second, M, cfg.weight2, cfg);
  if (job.format == "json") {
    nlohmann::ordered_json j;
    j["space"] = cfg.id;
    j["kind"] = to_string(kind);
    j["index"] = index;
    j["M"] = M;
    j["result"] = to_json(result);
    emit_json(out, j);
  } else if (job.format == "csv") {
    out << qexpansion_csv(result);
  } else {
    out << "T_" << M << " " << to_string(kind) << "_" << index << " = "
        << result.to_display_string(12) << "\n";
  }
  return 0;
}

int run_pair(const JobConfig& job, std::ostream& out) {
  const SpaceConfig& cfg = space_config(job.space);
  const SpaceConfig& dual = space_config(cfg.dual_id);
  long long m = default_or(job.index, index_sets(cfg).itilde_min());
  long long n = default_or(job.dual_index, index_sets(dual).jtilde_min());
  // Completeness needs the f-side expansion past the g-side pole and
  // vice versa; strict bounds, hence the +1.
  Rational f_prec = to_rational(std::max(default_or(job.prec, 0), std::llabs(n) + 1));
  Rational g_prec = to_rational(std::max(default_or(job.prec, 0), std::llabs(m) + 1));
  std::string dir = resolve_cache_dir(job);
  BasisFamily f_fam = cached_basis(cfg, FamilyKind::F, m, f_prec, dir);
  BasisFamily g_fam = cached_basis(dual, FamilyKind::G, n, g_prec, dir);
  auto fit = f_fam.members.find(m);
  auto git = g_fam.members.find(n);
  if (fit == f_fam.members.end())
    throw IndexMismatch("no f-family member of index " + std::to_string(m));
  if (git == g_fam.members.end())
    throw IndexMismatch("no g-family member of index " + std::to_string(n));
  PairingResult r = pair_infty(fit->second, git->second, cfg.width_infty,
                               cfg.hat_width);
  if (job.format == "json") {
    nlohmann::ordered_json j;
    j["f_space"] = cfg.id;
    j["g_space"] = dual.id;
    j["f_index"] = m;
    j["g_index"] = n;
    j["value"] = rational_to_string(r.value);
    j["complete"] = r.complete;
    j["contributing_range"] = {rational_to_string(r.contributing_range.first),
                               rational_to_string(r.contributing_range.second)};
    emit_json(out, j);
  } else if (job.format == "csv") {
    out << "f_index,g_index,value,complete\n"
        << m << "," << n << "," << rational_to_string(r.value) << ","
        << (r.complete ? "true" : "false") << "\n";
  } else {
    out << "<f_" << m << ", g_" << n << ">_infty = "
        << rational_to_string(r.value)
        << (r.complete ? "" : "  (incomplete)") << "\n";
  }
  return 0;
}

int run_table(const JobConfig& job, std::ostream& out) {
  const SpaceConfig& cfg = space_config(job.space);
  FamilyKind kind = family_kind_from_string(job.kind);
  long long max_index = default_or(job.window_m, 8);
  long long max_exp = default_or(job.window_n, 8);
  require_prec_covers(job.prec, max_exp + 1);
  Rational prec = to_rational(std::max(default_or(job.prec, 0), max_exp + 1));
  BasisFamily fam =
      cached_basis(cfg, kind, max_index, prec, resolve_cache_dir(job));

  // Columns: every exponent appearing in some member, up to max_exp.
  std::set<Rational> exponents;
  for (const auto& [idx, q] : fam.members)
    for (const auto& [e, c] : q.terms()) {
      Rational exp = to_rational(e) / to_rational(q.den());
      if (exp <= to_rational(max_exp)) exponents.insert(exp);
    }

  auto cell = [](const QExpansion& q, const Rational& e) {
    return rational_to_string(coefficient(q, e));
  };
  const char letter = kind == FamilyKind::F ? 'f' : 'g';

  if (job.format == "json") {
    nlohmann::ordered_json j;
    j["space"] = cfg.id;
    j["kind"] = to_string(kind);
    nlohmann::ordered_json cols = nlohmann::ordered_json::array();
    for (const Rational& e : exponents) cols.push_back(rational_to_string(e));
    j["exponents"] = std::move(cols);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& [idx, q] : fam.members) {
      nlohmann::ordered_json row;
      row["index"] = idx;
      nlohmann::ordered_json cs = nlohmann::ordered_json::array();
      for (const Rational& e : exponents) cs.push_back(cell(q, e));
      row["coefficients"] = std::move(cs);
      rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    emit_json(out, j);
  } else if (job.format == "csv") {
    out << "index";
    for (const Rational& e : exponents) out << "," << rational_to_string(e);
    out << "\n";
    for (const auto& [idx, q] : fam.members) {
      out << idx;
      for (const Rational& e : exponents) out << "," << cell(q, e);
      out << "\n";
    }
  } else {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{std::string(1, letter)};
    for (const Rational& e : exponents)
      header.push_back("q^" + rational_to_string(e));
    rows.push_back(std::move(header));
    for (const auto& [idx, q] : fam.members) {
      std::vector<std::string> row{std::string(1, letter) + "_" +
                                   std::to_string(idx)};
      for (const Rational& e : exponents) row.push_back(cell(q, e));
      rows.push_back(std::move(row));
    }
    out << pad_table(rows);
  }
  return 0;
}

}  // namespace

std::string basis_cache_key(const std::string& space_id, FamilyKind kind,
                            long long max_index, const Rational& prec) {
  std::ostringstream o;
  o << space_id << "|" << to_string(kind) << "|" << max_index << "|"
    << rational_to_string(prec) << "|" << library_version;
  return fnv1a64_hex(o.str());
}

BasisFamily cached_basis(const SpaceConfig& config, FamilyKind kind,
                         long long max_index, const Rational& prec,
                         const std::string& cache_dir) {
  if (cache_dir.empty()) return canonical_basis(config, kind, max_index, prec);
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::path dir(cache_dir);
  fs::create_directories(dir, ec);
  fs::path path =
      dir / (basis_cache_key(config.id, kind, max_index, prec) + ".json");

  if (fs::exists(path, ec)) {
    try {
      std::ifstream in(path);
      nlohmann::ordered_json doc = nlohmann::ordered_json::parse(in);
      if (!doc.is_object() || !doc.contains("checksum") ||
          !doc.contains("family"))
        throw CacheCorrupt("cache entry lacks checksum or payload");
      if (doc["checksum"].get<std::string>() !=
          fnv1a64_hex(doc["family"].dump()))
        throw CacheCorrupt("cache checksum mismatch");
      BasisFamily fam = family_from_json(doc["family"]);
      if (fam.space_id != config.id || fam.kind != kind ||
          fam.max_index != max_index || !fam.prec || *fam.prec != prec)
        throw CacheCorrupt("cache entry does not match its key");
      return fam;
    } catch (const std::exception&) {
      // Never trust a bad entry: evict and recompute.
      fs::remove(path, ec);
    }
  }

  BasisFamily fam = canonical_basis(config, kind, max_index, prec);
  nlohmann::ordered_json payload = to_json(fam);
  nlohmann::ordered_json doc;
  doc["checksum"] = fnv1a64_hex(payload.dump());
  doc["family"] = std::move(payload);
  fs::path tmp = path;
  tmp += "." + std::to_string(::getpid()) + ".tmp";
  {
    std::ofstream o(tmp);
    o << doc.dump(2) << "\n";
  }
  fs::rename(tmp, path, ec);
  if (ec) fs::remove(tmp, ec);
  return fam;
}

int run(const JobConfig& job, std::ostream& out, std::ostream& err) {
  try {
    if (job.space.empty()) throw ConfigError("--space is required");
    if (job.command == "basis") return run_basis(job, out);
    if (job.command == "grid") return run_grid(job, out);
    if (job.command == "genfun") return run_genfun(job, out);
    if (job.command == "hecke") return run_hecke(job, out);
    if (job.command == "pair") return run_pair(job, out);
    if (job.command == "table") return run_table(job, out);
    throw ConfigError("unknown command: " + job.command);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const MathError& e) {
    err << "invariant violation: " << e.what() << "\n";
    return 3;
  } catch (const PrecisionError& e) {
    err << "precision error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace modgrid
