#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "rss/errors.hpp"
#include "rss/mps.hpp"

namespace rss::mps {

namespace {

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

std::string var_name(const char* prefix, int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%s%04d", prefix, index + 1);
  return buf;
}

class Writer {
 public:
  void row(char sense, const std::string& name) {
    body_ << " " << sense << "  " << name << "\n";
  }
  void entry(const std::string& col, const std::string& row, double value) {
    body_ << "    " << pad(col, 10) << pad(row, 10) << num(value) << "\n";
  }
  void marker(const char* kind) {
    body_ << "    MARKER                 'MARKER'                 '" << kind
          << "'\n";
  }
  void bound(const char* type, const std::string& col) {
    body_ << " " << pad(type, 3) << pad("BND", 10) << col << "\n";
  }
  void bound(const char* type, const std::string& col, double value) {
    body_ << " " << pad(type, 3) << pad("BND", 10) << pad(col, 10) << num(value)
          << "\n";
  }
  void line(const std::string& text) { body_ << text << "\n"; }
  std::string str() const { return body_.str(); }

 private:
  std::ostringstream body_;
};

void atomic_write(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open for writing: " + tmp);
    out << content;
    if (!out) throw io_error("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw io_error("cannot rename " + tmp + " to " + path);
}

}  // namespace

void export_mps(const Dataset& dataset, const SparsityParams& params,
                const MioExport& mio, const std::string& path) {
  const int n = dataset.n();
  const int p = dataset.p();
  params.validate(n, p);
  const bool improved = mio.formulation == Formulation::improved;
  const bool with_eta = params.h < n;  // h = n fixes eta to zero, drop the block

  if (!std::isfinite(mio.big_m_beta) || mio.big_m_beta <= 0.0)
    throw contract_error("big_m_beta must be finite and positive");
  if (with_eta && (!std::isfinite(mio.big_m_eta) || mio.big_m_eta <= 0.0))
    throw contract_error("big_m_eta must be finite and positive when h < n");
  if (improved && (!std::isfinite(mio.big_m_xi) || mio.big_m_xi <= 0.0))
    throw contract_error("big_m_xi must be finite and positive");
  if (mio.warm_start &&
      (mio.warm_start->beta.size() != p || mio.warm_start->eta.size() != n))
    throw contract_error("warm start does not match dataset dimensions");

  const double objective_constant = 0.5 * dataset.y.squaredNorm();
  const Eigen::VectorXd xty = dataset.x.transpose() * dataset.y;

  Writer w;
  w.line("* Robust subset selection as a mixed-integer quadratic program.");
  w.line(std::string("* formulation: ") + (improved ? "improved" : "basic"));
  {
    std::ostringstream meta;
    meta << "* n=" << n << " p=" << p << " k=" << params.k << " h=" << params.h;
    w.line(meta.str());
  }
  {
    std::ostringstream meta;
    meta << "* big-M bounds (heuristic, not proven valid): beta="
         << num(mio.big_m_beta);
    if (with_eta) meta << " eta=" << num(mio.big_m_eta);
    if (improved) meta << " xi=" << num(mio.big_m_xi);
    if (std::isfinite(mio.tau)) meta << " tau=" << num(mio.tau);
    w.line(meta.str());
  }
  w.line("* objective = c'x + (1/2) x'Qx + constant; the constant " +
         num(objective_constant) +
         " is encoded as -constant in the RHS of row OBJ");
  if (!with_eta)
    w.line("* h = n: eta and its binaries are fixed at zero and omitted");
  if (mio.warm_start)
    w.line("* warm start written beside this file with extension .start");
  w.line("NAME          RSSMIQP");

  w.line("ROWS");
  w.row('N', "OBJ");
  w.row('L', "CARDS");
  if (with_eta) w.row('L', "CARDZ");
  if (improved)
    for (int i = 0; i < n; ++i) w.row('E', var_name("LNK", i));
  for (int j = 0; j < p; ++j) {
    w.row('L', var_name("BU", j));
    w.row('G', var_name("BL", j));
  }
  if (with_eta)
    for (int i = 0; i < n; ++i) {
      w.row('L', var_name("EU", i));
      w.row('G', var_name("EL", i));
    }

  w.line("COLUMNS");
  for (int j = 0; j < p; ++j) {
    std::string name = var_name("b", j);
    if (improved) {
      for (int i = 0; i < n; ++i)
        if (dataset.x(i, j) != 0.0)
          w.entry(name, var_name("LNK", i), -dataset.x(i, j));
    } else if (xty[j] != 0.0) {
      w.entry(name, "OBJ", -xty[j]);
    }
    w.entry(name, var_name("BU", j), 1.0);
    w.entry(name, var_name("BL", j), 1.0);
  }
  if (with_eta)
    for (int i = 0; i < n; ++i) {
      std::string name = var_name("e", i);
      if (improved) {
        w.entry(name, var_name("LNK", i), -1.0);
      } else if (dataset.y[i] != 0.0) {
        w.entry(name, "OBJ", -dataset.y[i]);
      }
      w.entry(name, var_name("EU", i), 1.0);
      w.entry(name, var_name("EL", i), 1.0);
    }
  if (improved)
    for (int i = 0; i < n; ++i) {
      std::string name = var_name("xi", i);
      if (dataset.y[i] != 0.0) w.entry(name, "OBJ", -dataset.y[i]);
      w.entry(name, var_name("LNK", i), 1.0);
    }
  w.marker("INTORG");
  for (int j = 0; j < p; ++j) {
    std::string name = var_name("s", j);
    w.entry(name, "CARDS", 1.0);
    w.entry(name, var_name("BU", j), -mio.big_m_beta);
    w.entry(name, var_name("BL", j), mio.big_m_beta);
  }
  if (with_eta)
    for (int i = 0; i < n; ++i) {
      std::string name = var_name("z", i);
      w.entry(name, "CARDZ", 1.0);
      w.entry(name, var_name("EU", i), -mio.big_m_eta);
      w.entry(name, var_name("EL", i), mio.big_m_eta);
    }
  w.marker("INTEND");

  w.line("RHS");
  if (objective_constant != 0.0) w.entry("RHS", "OBJ", -objective_constant);
  w.entry("RHS", "CARDS", static_cast<double>(params.k));
  if (with_eta) w.entry("RHS", "CARDZ", static_cast<double>(n - params.h));

  w.line("BOUNDS");
  for (int j = 0; j < p; ++j) {
    std::string name = var_name("b", j);
    if (improved) {
      w.bound("LO", name, -mio.big_m_beta);
      w.bound("UP", name, mio.big_m_beta);
    } else {
      w.bound("FR", name);
    }
  }
  if (with_eta)
    for (int i = 0; i < n; ++i) {
      std::string name = var_name("e", i);
      if (improved) {
        w.bound("LO", name, -mio.big_m_eta);
        w.bound("UP", name, mio.big_m_eta);
      } else {
        w.bound("FR", name);
      }
    }
  if (improved)
    for (int i = 0; i < n; ++i) {
      std::string name = var_name("xi", i);
      w.bound("LO", name, -mio.big_m_xi);
      w.bound("UP", name, mio.big_m_xi);
    }
  for (int j = 0; j < p; ++j) w.bound("BV", var_name("s", j));
  if (with_eta)
    for (int i = 0; i < n; ++i) w.bound("BV", var_name("z", i));

  w.line("QMATRIX");
  if (improved) {
    for (int i = 0; i < n; ++i)
      w.entry(var_name("xi", i), var_name("xi", i), 1.0);
  } else {
    Eigen::MatrixXd gram = dataset.x.transpose() * dataset.x;
    for (int j = 0; j < p; ++j)
      for (int l = 0; l < p; ++l)
        if (gram(j, l) != 0.0)
          w.entry(var_name("b", j), var_name("b", l), gram(j, l));
    if (with_eta) {
      for (int j = 0; j < p; ++j)
        for (int i = 0; i < n; ++i)
          if (dataset.x(i, j) != 0.0)
            w.entry(var_name("b", j), var_name("e", i), dataset.x(i, j));
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < p; ++j)
          if (dataset.x(i, j) != 0.0)
            w.entry(var_name("e", i), var_name("b", j), dataset.x(i, j));
        w.entry(var_name("e", i), var_name("e", i), 1.0);
      }
    }
  }
  w.line("ENDATA");

  atomic_write(path, w.str());

  if (mio.warm_start) {
    const Solution& ws = *mio.warm_start;
    Eigen::VectorXd fitted = dataset.x * ws.beta + ws.eta;
    std::ostringstream side;
    char buf[40];
    auto emit = [&](const std::string& name, double value) {
      std::snprintf(buf, sizeof(buf), "%.17g", value);
      side << name << " " << buf << "\n";
    };
    for (int j = 0; j < p; ++j) emit(var_name("b", j), ws.beta[j]);
    if (with_eta)
      for (int i = 0; i < n; ++i) emit(var_name("e", i), ws.eta[i]);
    if (improved)
      for (int i = 0; i < n; ++i) emit(var_name("xi", i), fitted[i]);
    for (int j = 0; j < p; ++j)
      emit(var_name("s", j), ws.beta[j] != 0.0 ? 1.0 : 0.0);
    if (with_eta)
      for (int i = 0; i < n; ++i)
        emit(var_name("z", i), ws.eta[i] != 0.0 ? 1.0 : 0.0);
    atomic_write(path + ".start", side.str());
  }
}

}  // namespace rss::mps
