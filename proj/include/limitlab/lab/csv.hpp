#pragma once

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include "limitlab/errors.hpp"

namespace limitlab {

// Numeric CSV with round-trip precision.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path, std::ios::trunc) {
    if (!out_) throw Error(ErrorCode::Io, "cannot write " + path);
    for (size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << "\n";
  }

  void row(std::initializer_list<double> values) {
    char buf[32];
    bool first = true;
    for (double v : values) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out_ << (first ? "" : ",") << buf;
      first = false;
    }
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

}  // namespace limitlab
