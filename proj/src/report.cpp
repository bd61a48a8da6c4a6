#include "bht/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

namespace bht {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw std::invalid_argument("csv: empty header");
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw std::invalid_argument("csv: row width differs from the header");
  rows_.push_back(std::move(row));
}

namespace {

std::string quote(const std::string& f) {
  if (f.find_first_of(",\"\r\n") == std::string::npos) return f;
  std::string out = "\"";
  for (char c : f) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void put_line(std::string& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += quote(fields[i]);
  }
  out += "\r\n";
}

}  // namespace

std::string CsvTable::str() const {
  std::string out;
  put_line(out, header_);
  for (const auto& r : rows_) put_line(out, r);
  return out;
}

std::size_t CsvTable::column(const std::string& name) const {
  auto it = std::find(header_.begin(), header_.end(), name);
  if (it == header_.end()) throw std::out_of_range("csv: no column " + name);
  return std::size_t(it - header_.begin());
}

CsvTable CsvTable::parse(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> rec;
  std::string field;
  bool quoted = false, field_started = false;
  std::size_t i = 0;
  auto end_field = [&] {
    rec.push_back(field);
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(rec));
    rec.clear();
  };
  while (i < text.size()) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          i += 2;
          continue;
        }
        quoted = false;
      } else {
        field += c;
      }
      ++i;
      continue;
    }
    if (c == '"') {
      if (field_started) throw std::runtime_error("csv: quote inside an unquoted field");
      quoted = field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\r' || c == '\n') {
      end_record();
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
    } else {
      field += c;
      field_started = true;
    }
    ++i;
  }
  if (quoted) throw std::runtime_error("csv: unterminated quoted field");
  if (field_started || !rec.empty()) end_record();
  if (records.empty()) throw std::runtime_error("csv: no header");
  CsvTable t(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != t.header_.size()) throw std::runtime_error("csv: ragged row " + std::to_string(r));
    t.rows_.push_back(std::move(records[r]));
  }
  return t;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    os << content;
    os.flush();
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename onto " + path + ": " + ec.message());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Check make_check(const std::string& name, double value, const std::string& relation, double threshold) {
  Check c{name, value, threshold, relation, false};
  if (relation == "<=") c.pass = value <= threshold;
  else if (relation == ">=") c.pass = value >= threshold;
  else if (relation == "<") c.pass = value < threshold;
  else if (relation == ">") c.pass = value > threshold;
  else if (relation == "within") c.pass = std::abs(value) <= threshold;
  else throw std::invalid_argument("check: unknown relation " + relation);
  return c;
}

bool ScanReport::pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

namespace {

json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

}  // namespace

json ScanReport::to_json() const {
  json j;
  j["scan"] = scan;
  j["params"] = params;
  json cells = json::array();
  for (std::size_t i = 0; i < axis.size(); ++i) cells.push_back({{"axis", number(axis[i])}, {"value", number(values[i])}});
  j["cells"] = cells;
  j["slope"] = slope ? number(*slope) : json(nullptr);
  j["r2"] = r2 ? number(*r2) : json(nullptr);
  j["pass"] = pass();
  j["tolerance"] = number(tolerance);
  json cs = json::array();
  for (const auto& c : checks)
    cs.push_back({{"name", c.name}, {"value", number(c.value)}, {"relation", c.relation},
                  {"threshold", number(c.threshold)}, {"pass", c.pass}});
  j["checks"] = cs;
  return j;
}

ScanReport scan_report(const DecayScanResult& scan, json params, double tolerance) {
  ScanReport r;
  r.scan = scan.scan;
  r.params = std::move(params);
  r.params["trials_per_cell"] = scan.trials_per_cell;
  r.params["seed"] = scan.seed;
  r.axis = scan.axis;
  r.values = scan.values;
  r.slope = scan.slope;
  if (scan.r2_defined) r.r2 = scan.r2;
  r.tolerance = tolerance;
  return r;
}

namespace {

std::string xml_escape(const std::string& t) {
  std::string out;
  for (char c : t) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else out += c;
  }
  return out;
}

std::string fx(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string render_svg(const DecayScanResult& scan) {
  if (scan.axis.empty() || scan.axis.size() != scan.values.size())
    throw std::invalid_argument("render_svg: empty scan");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < scan.axis.size(); ++i)
    if (scan.values[i] > 0.0 && std::isfinite(scan.values[i])) {
      xs.push_back(scan.axis[i]);
      ys.push_back(std::log2(scan.values[i]));
    }
  if (xs.empty()) throw std::invalid_argument("render_svg: no positive values");

  const double W = 640, H = 400, L = 70, R = 20, T = 30, B = 50;
  double x0 = *std::min_element(xs.begin(), xs.end()), x1 = *std::max_element(xs.begin(), xs.end());
  double y0 = *std::min_element(ys.begin(), ys.end()), y1 = *std::max_element(ys.begin(), ys.end());
  if (x1 == x0) { x0 -= 1; x1 += 1; }
  if (y1 == y0) { y0 -= 1; y1 += 1; }
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
  s += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  s += "<text x=\"320\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" + xml_escape(scan.scan) +
       "</text>\n";
  // axes with end labels
  s += "<line x1=\"" + fx(L) + "\" y1=\"" + fx(H - B) + "\" x2=\"" + fx(W - R) + "\" y2=\"" + fx(H - B) +
       "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + fx(L) + "\" y1=\"" + fx(T) + "\" x2=\"" + fx(L) + "\" y2=\"" + fx(H - B) +
       "\" stroke=\"black\"/>\n";
  auto label = [&](double x, double y, const std::string& anchor, const std::string& text) {
    s += "<text x=\"" + fx(x) + "\" y=\"" + fx(y) + "\" text-anchor=\"" + anchor +
         "\" font-family=\"sans-serif\" font-size=\"11\">" + text + "</text>\n";
  };
  label(px(x0), H - B + 16, "middle", fx(x0));
  label(px(x1), H - B + 16, "middle", fx(x1));
  label(L - 6, py(y0) + 4, "end", fx(y0));
  label(L - 6, py(y1) + 4, "end", fx(y1));
  label((L + W - R) / 2, H - 12, "middle", "axis");
  label(16, (T + H - B) / 2, "middle", "log2 value");
  for (std::size_t i = 0; i < xs.size(); ++i)
    s += "<circle cx=\"" + fx(px(xs[i])) + "\" cy=\"" + fx(py(ys[i])) + "\" r=\"3\" fill=\"steelblue\"/>\n";
  if (xs.size() >= 2) {
    double n = double(xs.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    double den = n * sxx - sx * sx;
    if (den != 0.0) {
      double slope = (n * sxy - sx * sy) / den, icpt = (sy - slope * sx) / n;
      s += "<line x1=\"" + fx(px(x0)) + "\" y1=\"" + fx(py(icpt + slope * x0)) + "\" x2=\"" + fx(px(x1)) +
           "\" y2=\"" + fx(py(icpt + slope * x1)) + "\" stroke=\"firebrick\" stroke-dasharray=\"4 3\"/>\n";
      char buf[64];
      std::snprintf(buf, sizeof buf, "slope = %.4f", slope);
      label(W - R - 4, T + 14, "end", buf);
    }
  }
  s += "</svg>\n";
  return s;
}

void emit_svg(const DecayScanResult& scan, const std::string& path) { write_file_atomic(path, render_svg(scan)); }

}  // namespace bht
