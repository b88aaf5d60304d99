#include "qres/integrals.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <tuple>

#include "qres/errors.hpp"

namespace qres {

double Tensor4::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

namespace {

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

struct Header {
  int norb = -1;
  int nelec = -1;
  int ms2 = 0;
  bool uhf = false;
};

int to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    int x = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ParseError("FCIDUMP header: bad integer for " + key + ": '" + v + "'");
  }
}

bool to_flag(const std::string& v) {
  std::string u = upper(v);
  if (u == ".TRUE." || u == "T" || u == "TRUE" || u == "1") return true;
  if (u == ".FALSE." || u == "F" || u == "FALSE" || u == "0") return false;
  throw ParseError("FCIDUMP header: bad logical '" + v + "'");
}

Header parse_header(const std::string& text) {
  // text is everything between &FCI and &END
  std::string flat;
  for (char c : text) flat += (c == ',' || c == '\n' || c == '\r' || c == '\t') ? ' ' : c;
  // split "KEY=VAL" and "KEY = VAL"
  std::string spaced;
  for (char c : flat) {
    if (c == '=') spaced += " = ";
    else spaced += c;
  }
  std::istringstream ss(spaced);
  std::vector<std::string> tok;
  for (std::string t; ss >> t;) tok.push_back(t);

  Header h;
  std::string key;
  for (std::size_t i = 0; i < tok.size(); ++i) {
    if (i + 1 < tok.size() && tok[i + 1] == "=") {
      key = upper(tok[i]);
      if (i + 2 >= tok.size()) throw ParseError("FCIDUMP header: missing value for " + key);
      const std::string& v = tok[i + 2];
      if (key == "NORB") h.norb = to_int(key, v);
      else if (key == "NELEC") h.nelec = to_int(key, v);
      else if (key == "MS2") h.ms2 = to_int(key, v);
      else if (key == "IUHF") h.uhf = to_int(key, v) != 0;
      else if (key == "UHF") h.uhf = to_flag(v);
      i += 2;
    } else if (tok[i] == "=") {
      throw ParseError("FCIDUMP header: stray '='");
    } else if (key.empty()) {
      throw ParseError("FCIDUMP header: unexpected token '" + tok[i] + "'");
    }
    // else: continuation of a list value (ORBSYM), ignored
  }
  if (h.norb <= 0) throw ParseError("FCIDUMP header: NORB missing or not positive");
  if (h.nelec < 0) throw ParseError("FCIDUMP header: NELEC missing");
  return h;
}

using Key = std::tuple<int, int, int, int, int>;  // block, i, j, k, l

void put(std::map<Key, double>& m, const Key& k, double v, const std::string& line) {
  auto [it, fresh] = m.emplace(k, v);
  if (!fresh && std::abs(it->second - v) > 1e-10)
    throw ConsistencyError("FCIDUMP: conflicting duplicate entry: " + line);
}

std::pair<int, int> ordered(int a, int b) { return a >= b ? std::make_pair(a, b) : std::make_pair(b, a); }

}  // namespace

SpinOrbitalIntegrals parse_fcidump(std::istream& in) {
  std::string line, header_text;
  bool started = false, ended = false;
  while (std::getline(in, line)) {
    std::string u = upper(line);
    if (!started) {
      auto pos = u.find("&FCI");
      if (pos == std::string::npos) {
        if (u.find_first_not_of(" \t\r") == std::string::npos) continue;
        throw ParseError("FCIDUMP: expected '&FCI' namelist header");
      }
      started = true;
      u = u.substr(pos + 4);
      line = line.substr(pos + 4);
    }
    auto end = u.find("&END");
    auto slash = u.find('/');
    if (end != std::string::npos || slash != std::string::npos) {
      auto cut = std::min(end, slash);
      header_text += line.substr(0, cut) + "\n";
      ended = true;
      break;
    }
    header_text += line + "\n";
  }
  if (!started || !ended) throw ParseError("FCIDUMP: unterminated namelist header");
  Header hd = parse_header(header_text);
  const int n = hd.norb;

  // blocks: 0 aa eri, 1 bb eri, 2 ab eri, 3 h alpha, 4 h beta (restricted uses 0 and 3)
  std::map<Key, double> entries;
  double core = 0.0;
  int section = 0;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::string vs;
    long long idx[4];
    ls >> vs;
    for (auto& x : idx) {
      if (!(ls >> x)) throw ParseError("FCIDUMP: malformed integral line " + std::to_string(lineno) + ": " + line);
    }
    std::string extra;
    if (ls >> extra) throw ParseError("FCIDUMP: trailing tokens on line: " + line);
    double v;
    try {
      std::replace(vs.begin(), vs.end(), 'D', 'E');
      std::replace(vs.begin(), vs.end(), 'd', 'e');
      std::size_t used = 0;
      v = std::stod(vs, &used);
      if (used != vs.size()) throw std::invalid_argument(vs);
    } catch (const std::exception&) {
      throw ParseError("FCIDUMP: bad value on line: " + line);
    }
    for (auto x : idx)
      if (x < 0 || x > n) throw IndexError("FCIDUMP: index out of range (NORB=" + std::to_string(n) + "): " + line);
    int i = static_cast<int>(idx[0]) - 1, j = static_cast<int>(idx[1]) - 1;
    int k = static_cast<int>(idx[2]) - 1, l = static_cast<int>(idx[3]) - 1;
    bool zi = idx[0] == 0, zj = idx[1] == 0, zk = idx[2] == 0, zl = idx[3] == 0;

    if (zi && zj && zk && zl) {
      if (hd.uhf && section < 5) {
        ++section;
      } else {
        core = v;
      }
      continue;
    }
    if (!zi && !zj && !zk && !zl) {
      int block = hd.uhf ? section : 0;
      if (block > 2) throw ParseError("FCIDUMP: two-electron integral in one-electron section: " + line);
      auto [a, b] = ordered(i, j);
      auto [c, d] = ordered(k, l);
      if (block != 2 && std::make_pair(a, b) < std::make_pair(c, d)) {
        std::swap(a, c);
        std::swap(b, d);
      }
      put(entries, {block, a, b, c, d}, v, line);
    } else if (!zi && !zj && zk && zl) {
      int block = 3;
      if (hd.uhf) {
        if (section < 3) throw ParseError("FCIDUMP: one-electron integral inside two-electron block: " + line);
        block = section;
        if (block > 4) throw ParseError("FCIDUMP: one-electron integral after the last block: " + line);
      }
      auto [a, b] = ordered(i, j);
      put(entries, {block, a, b, -1, -1}, v, line);
    } else if (!zi && zj && zk && zl) {
      // orbital energy lines carry no Hamiltonian information
    } else {
      throw ParseError("FCIDUMP: unsupported index pattern: " + line);
    }
  }

  SpinOrbitalIntegrals out;
  const std::size_t N = 2 * static_cast<std::size_t>(n);
  out.n_spin_orbitals = N;
  out.n_electrons = hd.nelec;
  out.ms2 = hd.ms2;
  out.e_core = core;
  out.reference_kind = hd.uhf ? ReferenceKind::unrestricted : ReferenceKind::restricted;
  out.h = Eigen::MatrixXd::Zero(N, N);
  out.g = Tensor4(N);

  auto set_eri = [&](int sa, int sb, int i, int j, int k, int l, double v) {
    std::size_t I = 2 * i + sa, J = 2 * j + sa, K = 2 * k + sb, L = 2 * l + sb;
    for (auto [p, q] : {std::pair{I, J}, std::pair{J, I}})
      for (auto [r, s] : {std::pair{K, L}, std::pair{L, K}}) {
        out.g(p, q, r, s) = v;
        out.g(r, s, p, q) = v;
      }
  };

  for (const auto& [key, v] : entries) {
    auto [block, i, j, k, l] = key;
    if (block == 0) {
      if (hd.uhf) {
        set_eri(0, 0, i, j, k, l, v);
      } else {
        for (int sa = 0; sa < 2; ++sa)
          for (int sb = 0; sb < 2; ++sb) set_eri(sa, sb, i, j, k, l, v);
      }
    } else if (block == 1) {
      set_eri(1, 1, i, j, k, l, v);
    } else if (block == 2) {
      set_eri(0, 1, i, j, k, l, v);
    } else {
      for (int s = 0; s < 2; ++s) {
        if (hd.uhf && s != block - 3) continue;
        out.h(2 * i + s, 2 * j + s) = v;
        out.h(2 * j + s, 2 * i + s) = v;
      }
    }
  }
  if (hd.nelec <= 0 || static_cast<std::size_t>(hd.nelec) > N)
    throw ParseError("FCIDUMP: NELEC out of range");
  return out;
}

SpinOrbitalIntegrals parse_fcidump_string(const std::string& text) {
  std::istringstream in(text);
  return parse_fcidump(in);
}

SpinOrbitalIntegrals load_fcidump(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ArgumentError("cannot open FCIDUMP file: " + path);
  return parse_fcidump(f);
}

void SpinOrbitalIntegrals::validate(double tol) const {
  const std::size_t N = n_spin_orbitals;
  if (N == 0 || N % 2) throw ConsistencyError("spin-orbital count must be even and positive");
  if (n_electrons <= 0 || static_cast<std::size_t>(n_electrons) > N)
    throw ConsistencyError("electron count out of range");
  if (static_cast<std::size_t>(h.rows()) != N || g.dim() != N) throw ConsistencyError("tensor size mismatch");
  for (std::size_t p = 0; p < N; ++p)
    for (std::size_t q = 0; q < N; ++q) {
      if (std::abs(h(p, q) - h(q, p)) > tol) throw ConsistencyError("h not symmetric");
      if (p % 2 != q % 2 && std::abs(h(p, q)) > tol) throw ConsistencyError("h couples different spins");
    }
  for (std::size_t p = 0; p < N; ++p)
    for (std::size_t q = 0; q < N; ++q)
      for (std::size_t r = 0; r < N; ++r)
        for (std::size_t s = 0; s < N; ++s) {
          double v = g(p, q, r, s);
          if ((p % 2 != q % 2 || r % 2 != s % 2) && std::abs(v) > tol)
            throw ConsistencyError("g couples different spins within a pair");
          if (std::abs(v - g(q, p, r, s)) > tol || std::abs(v - g(p, q, s, r)) > tol ||
              std::abs(v - g(r, s, p, q)) > tol)
            throw ConsistencyError("g lacks permutational symmetry");
        }
}

void write_fcidump(std::ostream& out, const SpinOrbitalIntegrals& ints) {
  const int n = static_cast<int>(ints.n_spatial());
  const bool uhf = ints.reference_kind == ReferenceKind::unrestricted;
  out << " &FCI NORB=" << n << ",NELEC=" << ints.n_electrons << ",MS2=" << ints.ms2 << ",\n";
  out << "  ORBSYM=";
  for (int i = 0; i < n; ++i) out << "1,";
  out << "\n  ISYM=1,\n";
  if (uhf) out << "  IUHF=1,\n";
  out << " &END\n";
  out << std::setprecision(17) << std::scientific;
  auto line = [&](double v, int i, int j, int k, int l) {
    out << std::setw(25) << v << ' ' << i << ' ' << j << ' ' << k << ' ' << l << '\n';
  };
  auto eri_block = [&](int sa, int sb, bool pair_sym) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l <= k; ++l) {
            if (pair_sym && i * (i + 1) / 2 + j < k * (k + 1) / 2 + l) continue;
            double v = ints.g(2 * i + sa, 2 * j + sa, 2 * k + sb, 2 * l + sb);
            if (v != 0.0) line(v, i + 1, j + 1, k + 1, l + 1);
          }
  };
  auto h_block = [&](int s) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) {
        double v = ints.h(2 * i + s, 2 * j + s);
        if (v != 0.0) line(v, i + 1, j + 1, 0, 0);
      }
  };
  if (!uhf) {
    eri_block(0, 0, true);
    h_block(0);
  } else {
    eri_block(0, 0, true);
    line(0.0, 0, 0, 0, 0);
    eri_block(1, 1, true);
    line(0.0, 0, 0, 0, 0);
    eri_block(0, 1, false);
    line(0.0, 0, 0, 0, 0);
    h_block(0);
    line(0.0, 0, 0, 0, 0);
    h_block(1);
    line(0.0, 0, 0, 0, 0);
  }
  line(ints.e_core, 0, 0, 0, 0);
}

FermionicOperator FermionicOperator::zero(std::size_t n) {
  FermionicOperator f;
  f.n_spin_orbitals = n;
  f.h = Eigen::MatrixXd::Zero(n, n);
  f.g = Tensor4(n);
  return f;
}

FermionicOperator& FermionicOperator::operator+=(const FermionicOperator& o) {
  if (o.n_spin_orbitals != n_spin_orbitals) throw DimensionError("fermionic operator size mismatch");
  constant += o.constant;
  h += o.h;
  for (std::size_t i = 0; i < g.data().size(); ++i) g.data()[i] += o.g.data()[i];
  return *this;
}

FermionicOperator FermionicOperator::operator-(const FermionicOperator& o) const {
  FermionicOperator r = *this;
  FermionicOperator neg = o;
  neg.constant = -neg.constant;
  neg.h = -neg.h;
  for (auto& v : neg.g.data()) v = -v;
  r += neg;
  return r;
}

FermionicOperator assemble_fermionic_hamiltonian(const SpinOrbitalIntegrals& ints) {
  // 1/2 sum (pq|rs) a+p a+r a_s a_q = 1/2 sum (pq|rs) (E_pq E_rs - delta_qr E_ps)
  const std::size_t N = ints.n_spin_orbitals;
  FermionicOperator f = FermionicOperator::zero(N);
  f.constant = ints.e_core;
  f.h = ints.h;
  for (std::size_t p = 0; p < N; ++p)
    for (std::size_t q = 0; q < N; ++q)
      for (std::size_t r = 0; r < N; ++r)
        for (std::size_t s = 0; s < N; ++s) {
          double v = ints.g(p, q, r, s);
          if (v == 0.0) continue;
          f.g(p, q, r, s) = 0.5 * v;
          if (q == r) f.h(p, s) -= 0.5 * v;
        }
  return f;
}

FermionicOperator number_operator(std::size_t n) {
  FermionicOperator f = FermionicOperator::zero(n);
  f.h = Eigen::MatrixXd::Identity(n, n);
  return f;
}

FermionicOperator number_squared_operator(std::size_t n) {
  FermionicOperator f = FermionicOperator::zero(n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) f.g(p, p, q, q) = 1.0;
  return f;
}

Eigen::MatrixXd rotated_one_body(const Eigen::MatrixXd& rotation, const Eigen::VectorXd& diag) {
  return rotation * diag.asDiagonal() * rotation.transpose();
}

}  // namespace qres
