#include "blowup/profile_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <boost/crc.hpp>
#include <json.hpp>

#include "blowup/error.hpp"

namespace blowup {
namespace {

using nlohmann::json;

std::string crc_hex(const std::string& s) {
  boost::crc_32_type crc;
  crc.process_bytes(s.data(), s.size());
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", crc.checksum());
  return buf;
}

json spec_json(const GridSpec& g) {
  return {{"h_core", g.h_core}, {"r_core", g.r_core}, {"r_max", g.r_max}, {"tail_step", g.tail_step}};
}

GridSpec spec_from(const json& j) {
  GridSpec g;
  g.h_core = j.at("h_core").get<double>();
  g.r_core = j.at("r_core").get<double>();
  g.r_max = j.at("r_max").get<double>();
  g.tail_step = j.at("tail_step").get<double>();
  return g;
}

json tail_json(const TailFit& t) {
  return {{"r_a", t.r_a},
          {"r_b", t.r_b},
          {"exponent", t.exponent},
          {"coefficient", t.coefficient},
          {"residual", t.residual},
          {"has_sub", t.has_sub},
          {"sub_exponent", t.sub_exponent},
          {"sub_coefficient", t.sub_coefficient},
          {"sub_residual", t.sub_residual}};
}

TailFit tail_from(const json& j) {
  TailFit t;
  t.r_a = j.at("r_a");
  t.r_b = j.at("r_b");
  t.exponent = j.at("exponent");
  t.coefficient = j.at("coefficient");
  t.residual = j.at("residual");
  t.has_sub = j.at("has_sub");
  t.sub_exponent = j.at("sub_exponent");
  t.sub_coefficient = j.at("sub_coefficient");
  t.sub_residual = j.at("sub_residual");
  return t;
}

json profile_json(const RadialProfile& p) {
  json j = {{"name", p.name}, {"parity", p.parity}, {"singular_origin", p.singular_origin}, {"f", p.f}, {"df", p.df}};
  if (p.tail) j["tail"] = tail_json(*p.tail);
  return j;
}

RadialProfile profile_from(const json& j, std::shared_ptr<const RadialGrid> grid) {
  RadialProfile p;
  p.grid = grid;
  p.name = j.at("name");
  p.parity = j.at("parity");
  p.singular_origin = j.at("singular_origin");
  p.f = j.at("f").get<std::vector<double>>();
  p.df = j.at("df").get<std::vector<double>>();
  if (j.contains("tail")) p.tail = tail_from(j.at("tail"));
  if (p.f.size() != grid->size() || p.df.size() != grid->size())
    throw Error(Errc::CacheCorrupt, "profile '" + p.name + "' does not match the stored grid");
  return p;
}

json read_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidInput, "cannot open cache file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::CacheCorrupt, path.string() + ": " + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != "blowup-profile-cache")
    throw Error(Errc::CacheCorrupt, path.string() + ": not a profile cache");
  if (doc.value("version", 0) != kProfileCacheVersion)
    throw Error(Errc::CacheCorrupt, path.string() + ": unsupported cache version");
  if (!doc.contains("payload") || !doc.contains("checksum"))
    throw Error(Errc::CacheCorrupt, path.string() + ": missing payload or checksum");
  const std::string want = doc.at("checksum");
  const std::string got = crc_hex(doc.at("payload").dump());
  if (want != got) throw Error(Errc::CacheCorrupt, path.string() + ": checksum " + got + " != " + want);
  return doc;
}

void write_document(const std::filesystem::path& path, json payload) {
  json doc = {{"format", "blowup-profile-cache"}, {"version", kProfileCacheVersion}};
  doc["checksum"] = crc_hex(payload.dump());
  doc["payload"] = std::move(payload);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw Error(Errc::InvalidInput, "cannot write cache file " + tmp.string());
    out << doc.dump();
    if (!out) throw Error(Errc::InvalidInput, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

std::string cache_file_name(const ConstantsTable& table, const GridSpec& spec) {
  std::ostringstream os;
  os << "profile_d" << table.d() << "_p" << table.p() << "_" << crc_hex(spec_json(spec).dump()) << ".json";
  return os.str();
}

void save_profile_cache(const std::filesystem::path& path, const ConstantsTable& table, const GroundState& gs,
                        const std::vector<const RadialProfile*>& extra) {
  if (!gs.Q.grid) throw Error(Errc::InvalidInput, "ground state without a grid");
  json payload = {{"d", table.d()},
                  {"p", table.p()},
                  {"grid", spec_json(gs.Q.grid->spec())},
                  {"Q", profile_json(gs.Q)},
                  {"w", gs.w},
                  {"w_t", gs.w_t},
                  {"w_tt", gs.w_tt},
                  {"extra", json::object()}};
  for (const auto* p : extra) {
    if (p->grid->spec() != gs.Q.grid->spec()) throw Error(Errc::GridMismatch, "extra profile on another grid");
    payload["extra"][p->name] = profile_json(*p);
  }
  write_document(path, std::move(payload));
}

ProfileCache load_profile_cache(const std::filesystem::path& path) {
  const json doc = read_document(path);
  const json& pl = doc.at("payload");
  ProfileCache c;
  try {
    c.d = pl.at("d");
    c.p = pl.at("p");
    c.spec = spec_from(pl.at("grid"));
    c.grid = RadialGrid::make(c.spec);
    c.gs.Q = profile_from(pl.at("Q"), c.grid);
    c.gs.w = pl.at("w").get<std::vector<double>>();
    c.gs.w_t = pl.at("w_t").get<std::vector<double>>();
    c.gs.w_tt = pl.at("w_tt").get<std::vector<double>>();
    for (const auto& [name, pj] : pl.at("extra").items()) c.extra.emplace(name, profile_from(pj, c.grid));
  } catch (const json::exception& e) {
    throw Error(Errc::CacheCorrupt, path.string() + ": " + e.what());
  }
  const std::size_t n = c.grid->size();
  if (c.gs.w.size() != n || c.gs.w_t.size() != n || c.gs.w_tt.size() != n)
    throw Error(Errc::CacheCorrupt, path.string() + ": array lengths do not match the grid");
  return c;
}

CachedGroundState cached_ground_state(const ConstantsTable& table, std::shared_ptr<const RadialGrid> grid,
                                      const std::filesystem::path& dir) {
  CachedGroundState out;
  out.path = dir / cache_file_name(table, grid->spec());
  if (std::filesystem::exists(out.path)) {
    ProfileCache c = load_profile_cache(out.path);
    if (c.d == table.d() && c.p == table.p() && c.spec == grid->spec()) {
      out.gs = std::move(c.gs);
      out.gs.Q.grid = grid;
      out.hit = true;
      return out;
    }
  }
  out.gs = compute_ground_state(table, grid);
  save_profile_cache(out.path, table, out.gs);
  return out;
}

void append_ladder(const std::filesystem::path& path, const ProfileLadder& ladder) {
  json doc = read_document(path);
  json payload = doc.at("payload");
  const GridSpec spec = spec_from(payload.at("grid"));
  auto put = [&](const RadialProfile& p, const std::string& key) {
    if (p.grid->spec() != spec) throw Error(Errc::GridMismatch, "ladder profile on another grid");
    payload["extra"][key] = profile_json(p);
    payload["extra"][key]["name"] = key;
  };
  for (std::size_t i = 0; i < ladder.T.size(); ++i) put(ladder.T[i], "T" + std::to_string(i) + "_n" + std::to_string(ladder.n));
  for (std::size_t i = 0; i < ladder.Theta.size(); ++i)
    put(ladder.Theta[i], "Theta" + std::to_string(i) + "_n" + std::to_string(ladder.n));
  write_document(path, std::move(payload));
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<const std::vector<double>*>& columns) {
  if (header.size() != columns.size()) throw Error(Errc::InvalidInput, "header and column counts differ");
  const std::size_t n = columns.empty() ? 0 : columns.front()->size();
  for (const auto* c : columns)
    if (c->size() != n) throw Error(Errc::InvalidInput, "csv columns differ in length");
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(Errc::InvalidInput, "cannot write " + path.string());
  for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
  out << '\n';
  char buf[32];
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < columns.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", (*columns[k])[j]);
      out << (k ? "," : "") << buf;
    }
    out << '\n';
  }
}

}  // namespace blowup
