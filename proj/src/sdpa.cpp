// SDPA sparse format (.dat-s). Variables are free; every nonnegative row and
// both halves of every equality go into one leading diagonal block.

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <tuple>

#include "prelax/conic.hpp"

namespace prelax {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string export_sdpa(const ConicProgram& prog) {
  if (!prog.lowered()) throw InvalidArgument("export_sdpa: lower geometric-mean cones first");
  prog.validate();
  const int m = prog.num_vars();
  const int lp = static_cast<int>(prog.inequalities.size() + 2 * prog.equalities.size());
  if (m == 0 || (lp == 0 && prog.blocks.empty())) throw InvalidArgument("export_sdpa: empty program");

  // (matno, blkno, i, j) -> value
  std::map<std::tuple<int, int, int, int>, double> entries;
  auto put = [&](int mat, int blk, int i, int j, double v) {
    if (v != 0.0) entries[{mat, blk, i, j}] += v;
  };
  auto put_affine = [&](const SparseAffine& a, int blk, int i, int j, double sign) {
    put(0, blk, i, j, -sign * a.constant);
    for (const auto& [k, c] : a.coeffs) put(k + 1, blk, i, j, sign * c);
  };

  std::vector<int> sizes;
  int blk = 0;
  if (lp > 0) {
    sizes.push_back(-lp);
    blk = 1;
    int r = 1;
    for (const auto& row : prog.inequalities) {
      put_affine(row.expr, blk, r, r, 1.0);
      ++r;
    }
    for (const auto& row : prog.equalities) {
      put_affine(row.expr, blk, r, r, 1.0);
      put_affine(row.expr, blk, r + 1, r + 1, -1.0);
      r += 2;
    }
  }
  for (const auto& b : prog.blocks) {
    sizes.push_back(b.size);
    ++blk;
    for (const auto& e : b.entries) put_affine(e.expr, blk, e.i + 1, e.j + 1, 1.0);
  }

  std::vector<double> c(m, 0.0);
  for (const auto& [k, v] : prog.objective.coeffs) c[k] += v;

  std::ostringstream os;
  os << m << "\n" << sizes.size() << "\n";
  for (std::size_t i = 0; i < sizes.size(); ++i) os << (i ? " " : "") << sizes[i];
  os << "\n";
  for (int k = 0; k < m; ++k) os << (k ? " " : "") << fmt(c[k]);
  os << "\n";
  for (const auto& [key, v] : entries) {
    if (v == 0.0) continue;
    const auto& [mat, b, i, j] = key;
    os << mat << " " << b << " " << i << " " << j << " " << fmt(v) << "\n";
  }
  return os.str();
}

ConicProgram import_sdpa(const std::string& text) {
  std::string clean;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && (line[0] == '*' || line[0] == '"')) continue;
    for (char& ch : line) {
      if (ch == '{' || ch == '}' || ch == '(' || ch == ')' || ch == ',') ch = ' ';
    }
    clean += line + "\n";
  }
  std::istringstream in(clean);
  int m = 0, nblocks = 0;
  if (!(in >> m >> nblocks) || m <= 0 || nblocks <= 0) throw InvalidArgument("import_sdpa: bad header");
  std::vector<int> sizes(nblocks);
  for (int& s : sizes) {
    if (!(in >> s) || s == 0) throw InvalidArgument("import_sdpa: bad block sizes");
  }
  ConicProgram prog;
  for (int k = 0; k < m; ++k) prog.add_variable({std::nullopt, "x" + std::to_string(k + 1)});
  for (int k = 0; k < m; ++k) {
    double c = 0;
    if (!(in >> c)) throw InvalidArgument("import_sdpa: bad objective vector");
    prog.objective.add(k, c);
  }

  // Per block: (i, j) -> affine entry.
  std::vector<std::map<std::pair<int, int>, SparseAffine>> data(nblocks);
  int mat, b, i, j;
  double v;
  while (in >> mat >> b >> i >> j >> v) {
    if (mat < 0 || mat > m || b < 1 || b > nblocks) throw InvalidArgument("import_sdpa: entry index out of range");
    const int sz = std::abs(sizes[b - 1]);
    if (i > j) std::swap(i, j);
    if (i < 1 || j > sz) throw InvalidArgument("import_sdpa: entry outside block");
    if (sizes[b - 1] < 0 && i != j) throw InvalidArgument("import_sdpa: off-diagonal entry in diagonal block");
    SparseAffine& a = data[b - 1][{i - 1, j - 1}];
    if (mat == 0) {
      a.constant -= v;
    } else {
      a.add(mat - 1, v);
    }
  }
  if (!in.eof()) throw InvalidArgument("import_sdpa: trailing garbage");

  for (int bi = 0; bi < nblocks; ++bi) {
    if (sizes[bi] < 0) {
      for (int r = 0; r < -sizes[bi]; ++r) {
        ProgramRow row;
        auto it = data[bi].find({r, r});
        if (it != data[bi].end()) row.expr = it->second;
        row.expr.normalize();
        prog.inequalities.push_back(std::move(row));
      }
    } else {
      ProgramBlock blk;
      blk.size = sizes[bi];
      for (auto& [ij, a] : data[bi]) {
        a.normalize();
        blk.entries.push_back({ij.first, ij.second, a});
      }
      prog.blocks.push_back(std::move(blk));
    }
  }
  prog.objective.normalize();
  return prog;
}

}  // namespace prelax
