#include "pogit/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pogit {

bool Dataset::has(const std::string& name) const {
  for (const auto& n : names_) {
    if (n == name) return true;
  }
  return false;
}

const Eigen::VectorXd& Dataset::col(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return columns_[i];
  }
  throw std::out_of_range("dataset has no column named '" + name + "'");
}

void Dataset::add(const std::string& name, Eigen::VectorXd values) {
  if (name.empty()) throw std::invalid_argument("column name must be nonempty");
  if (has(name)) throw std::invalid_argument("duplicate column '" + name + "'");
  if (!names_.empty() && values.size() != n_rows_) {
    std::ostringstream msg;
    msg << "column '" << name << "' has " << values.size()
        << " rows, expected " << n_rows_;
    throw std::invalid_argument(msg.str());
  }
  n_rows_ = values.size();
  names_.push_back(name);
  columns_.push_back(std::move(values));
}

Dataset Dataset::head(Eigen::Index n) const {
  if (n > n_rows_) n = n_rows_;
  Dataset out;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    out.add(names_[i], columns_[i].head(n));
  }
  return out;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

}  // namespace

Dataset read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::string line;
  std::vector<std::string> names;
  std::size_t line_no = 0;
  // Header: first non-comment line.
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    names = split_line(line);
    break;
  }
  if (names.empty()) {
    throw std::runtime_error("'" + path + "': missing CSV header row");
  }
  std::vector<std::vector<double>> cols(names.size());
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::vector<std::string> fields = split_line(line);
    if (fields.size() != names.size()) {
      std::ostringstream msg;
      msg << path << ":" << line_no << ": expected " << names.size()
          << " fields, found " << fields.size();
      throw std::runtime_error(msg.str());
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(fields[c], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != fields[c].size() || fields[c].empty()) {
        std::ostringstream msg;
        msg << path << ":" << line_no << ": column '" << names[c]
            << "': cannot parse '" << fields[c] << "' as a number";
        throw std::runtime_error(msg.str());
      }
      cols[c].push_back(v);
    }
  }
  Dataset out;
  for (std::size_t c = 0; c < names.size(); ++c) {
    out.add(names[c], Eigen::Map<Eigen::VectorXd>(
                          cols[c].data(), static_cast<Eigen::Index>(cols[c].size())));
  }
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const Dataset& data,
               const std::vector<std::string>& header_lines) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  for (const auto& h : header_lines) out << "# " << h << "\n";
  const auto& names = data.names();
  for (std::size_t c = 0; c < names.size(); ++c) {
    out << (c ? "," : "") << names[c];
  }
  out << "\n";
  for (Eigen::Index r = 0; r < data.n_rows(); ++r) {
    for (std::size_t c = 0; c < names.size(); ++c) {
      out << (c ? "," : "") << format_double(data.col(names[c])(r));
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace pogit
