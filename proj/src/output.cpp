#include "nlfv/output.hpp"

#include "nlfv/format.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace nlfv {

const char* const kVersion = "0.1.0";

namespace fs = std::filesystem;

std::string csv_1d(const Field1D& f, const Grid1D& g) {
  std::string out = "x,u\n";
  for (int i = 0; i < g.n_cells; ++i)
    out += format_double(g.center(i)) + "," + format_double(f.values[i]) + "\n";
  return out;
}

std::string csv_2d(const Field2D& f, const Grid2D& g) {
  std::string out = "x,y,u\n";
  for (int j = 0; j < g.ny; ++j) {
    const std::string y = format_double(g.center_y(j));
    for (int i = 0; i < g.nx; ++i)
      out += format_double(g.center_x(i)) + "," + y + "," + format_double(f.values(i, j)) + "\n";
  }
  return out;
}

std::string csv_convergence(const ConvergenceTable& t) {
  std::string out = "dx,l1_distance,alpha\n";
  for (const auto& r : t.rows)
    out += format_double(r.dx) + "," + format_double(r.l1_distance) + "," +
           (r.alpha ? format_double(*r.alpha) : "") + "\n";
  return out;
}

std::string csv_eta_sweep(const std::vector<EtaSweepRow>& rows) {
  std::string out = "eta,l1_distance\n";
  for (const auto& r : rows) out += format_double(r.eta) + "," + format_double(r.l1_distance) + "\n";
  return out;
}

std::string pgm_heatmap(const Field2D& f) {
  const Eigen::Index nx = f.values.rows(), ny = f.values.cols();
  const double top = std::max(1.0, f.values.size() > 0 ? f.values.maxCoeff() : 1.0);
  std::string out = "P5\n" + std::to_string(nx) + " " + std::to_string(ny) + "\n255\n";
  for (Eigen::Index j = ny - 1; j >= 0; --j)
    for (Eigen::Index i = 0; i < nx; ++i) {
      const double s = std::clamp(f.values(i, j) / top, 0.0, 1.0);
      out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * (1.0 - s)))));
    }
  return out;
}

std::string svg_profiles(const std::vector<std::pair<std::string, const Field1D*>>& curves,
                         const Grid1D& g, const std::string& title) {
  const double W = 720, H = 360, L = 60, R = 20, T = 30, B = 40;
  double lo = 0.0, hi = 1.0;
  for (const auto& c : curves) {
    lo = std::min(lo, c.second->values.minCoeff());
    hi = std::max(hi, c.second->values.maxCoeff());
  }
  if (hi - lo < 1e-12) hi = lo + 1.0;
  auto px = [&](double x) { return L + (x - g.x_min) / (g.x_max - g.x_min) * (W - L - R); };
  auto py = [&](double u) { return T + (hi - u) / (hi - lo) * (H - T - B); };
  static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  std::ostringstream os;
  os << std::setprecision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"18\" text-anchor=\"middle\">" << title << "</text>\n";
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\""
     << H - T - B << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << L << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">"
     << g.x_min << "</text>\n";
  os << "<text x=\"" << W - R << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">"
     << g.x_max << "</text>\n";
  os << "<text x=\"" << L - 6 << "\" y=\"" << py(lo) << "\" text-anchor=\"end\">" << lo
     << "</text>\n";
  os << "<text x=\"" << L - 6 << "\" y=\"" << py(hi) + 4 << "\" text-anchor=\"end\">" << hi
     << "</text>\n";
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const char* col = colours[c % 6];
    os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.2\" points=\"";
    const Vector& v = curves[c].second->values;
    for (int i = 0; i < g.n_cells; ++i) os << px(g.center(i)) << "," << py(v[i]) << " ";
    os << "\"/>\n";
    os << "<text x=\"" << W - R - 4 << "\" y=\"" << T + 16 + 14 * c << "\" text-anchor=\"end\" fill=\""
       << col << "\">" << curves[c].first << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i)
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

OutputSet::OutputSet(std::string dir, std::string command, std::string config_json)
    : dir_(std::move(dir)), command_(std::move(command)), config_json_(std::move(config_json)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir_ + "': " + ec.message());
}

std::string OutputSet::write(const std::string& name, const std::string& bytes) {
  const std::string path = (fs::path(dir_) / name).string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  auto it = std::find_if(files_.begin(), files_.end(), [&](const Entry& e) { return e.name == name; });
  Entry e{name, bytes.size(), sha256_hex(bytes)};
  if (it != files_.end()) *it = e; else files_.push_back(e);
  return path;
}

void OutputSet::phase(const std::string& name, double seconds) { phases_.emplace_back(name, seconds); }

void OutputSet::note(const std::string& key, const std::string& value) {
  notes_.emplace_back(key, value);
}

std::string OutputSet::finish(const std::string& stem) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["tool"] = "nlfv";
  j["version"] = kVersion;
  j["command"] = command_;
  j["config"] = ordered_json::parse(config_json_);
  ordered_json ph = ordered_json::object();
  for (const auto& [k, v] : phases_) ph[k] = v;
  j["wall_seconds"] = ph;
  for (const auto& [k, v] : notes_) j["notes"][k] = v;
  ordered_json files = ordered_json::array();
  for (const auto& e : files_)
    files.push_back({{"path", e.name}, {"bytes", e.bytes}, {"sha256", e.sha256}});
  j["files"] = files;
  const std::string path = (fs::path(dir_) / (stem + "manifest.json")).string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
  return path;
}

}  // namespace nlfv
