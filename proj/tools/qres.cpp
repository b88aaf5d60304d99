#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qres/costs.hpp"
#include "qres/errors.hpp"
#include "qres/fermion_frag.hpp"
#include "qres/integrals.hpp"
#include "qres/pauli_frag.hpp"
#include "qres/qcc.hpp"
#include "qres/report.hpp"
#include "qres/states.hpp"

using namespace qres;

namespace {

struct Config {
  std::string fixture;
  std::string method;
  double epsilon = 1e-3;
  bool shift = false;
  std::string sector;
  std::uint64_t seed = 7;
  std::string out;
  bool dump_pauli = false;
  bool large = false;
  int k = 1;
  double p0 = 1.0;
  std::vector<std::size_t> nent{10, 20, 50};
  int restarts = 3;
  std::size_t batch = 10;
  std::vector<std::string> reports;
  std::string csv;
};

struct MissingFixture : Error {
  using Error::Error;
};

struct Problem {
  SpinOrbitalIntegrals ints;
  FermionicOperator op;
  PauliPolynomial hq;
  std::string molecule, geometry;
};

Problem load(const Config& c) {
  if (!std::filesystem::exists(c.fixture)) throw MissingFixture("fixture not found: " + c.fixture);
  Problem p;
  p.ints = load_fcidump(c.fixture);
  if (p.ints.n_spin_orbitals > 8 && !c.large)
    throw ArgumentError("fixtures above 8 qubits need --large");
  p.op = assemble_fermionic_hamiltonian(p.ints);
  p.hq = jordan_wigner(p.op);
  std::string stem = std::filesystem::path(c.fixture).stem().string();
  auto cut = stem.rfind('_');
  p.molecule = cut == std::string::npos ? stem : stem.substr(0, cut);
  p.geometry = cut == std::string::npos ? "" : stem.substr(cut + 1);
  if (c.dump_pauli) {
    std::ofstream f(c.fixture + ".pauli");
    write_pauli(f, p.hq);
  }
  return p;
}

SymmetrySector electron_sector(const Config& c, const Problem& p) {
  if (c.sector.empty()) return SymmetrySector::electrons(p.ints.n_electrons);
  if (c.sector.rfind("ne=", 0) != 0) throw ArgumentError("--sector expects ne=<int>");
  return SymmetrySector::electrons(std::stoi(c.sector.substr(3)));
}

void emit(const Config& c, const json& j) {
  if (c.out.empty()) std::cout << j.dump() << '\n';
  else append_jsonl(c.out, j);
}

CostReport base_report(const Config& c, const Problem& p) {
  CostReport r;
  r.method = c.method;
  r.molecule = p.molecule;
  r.geometry = p.geometry;
  r.epsilon = c.epsilon;
  return r;
}

FragmentSet lr_set(const Problem& p, const std::string& method) {
  return make_fermion_fragment_set(low_rank_decompose(p.op), p.op.constant, p.hq.n_qubits(), method);
}

double reconstruction_error(const FragmentSet& fs, const PauliPolynomial& h) {
  PauliPolynomial d = fs.total() - h;
  double m = 0.0;
  for (const auto& [k, v] : d.terms()) m = std::max(m, std::abs(v));
  return m;
}

int cmd_partition(const Config& c) {
  Problem p = load(c);
  FragmentSet fs;
  if (c.method == "fc-si") fs = sorted_insertion(p.hq, FragmentKind::commuting);
  else if (c.method == "ac-si") fs = sorted_insertion(p.hq, FragmentKind::anticommuting);
  else if (c.method == "lr") fs = lr_set(p, "lr");
  else if (c.method == "lr-lcu")
    fs = make_fermion_fragment_set(lr_lcu_optimize(low_rank_decompose(p.op)).fragments, p.op.constant,
                                   p.hq.n_qubits(), "lr-lcu");
  else throw ArgumentError("partition: unknown method " + c.method);
  json j;
  j["kind"] = "partition";
  j["method"] = c.method;
  j["molecule"] = p.molecule;
  j["geometry"] = p.geometry;
  j["n_qubits"] = p.hq.n_qubits();
  j["n_terms"] = p.hq.size();
  j["n_fragments"] = fs.size();
  json sizes = json::array();
  if (fs.kind == FragmentKind::fermionic)
    for (const auto& op : fs.operators) sizes.push_back(op.size());
  else
    for (const auto& g : fs.pauli) sizes.push_back(g.members.size());
  j["fragment_terms"] = sizes;
  j["constant"] = fs.constant;
  j["reconstruction_error"] = reconstruction_error(fs, p.hq);
  j["units"] = {{"constant", "hartree"}, {"reconstruction_error", "hartree"}, {"n_fragments", "count"}};
  emit(c, j);
  return 0;
}

int cmd_measure(const Config& c) {
  Problem p = load(c);
  CostReport r = base_report(c, p);
  auto hf = hf_state(p.hq.n_qubits(), p.ints.n_electrons);
  CisdResult proxy = cisd_state(p.hq, hf);
  FragmentSet fs;
  if (c.method == "fc-si") fs = sorted_insertion(p.hq, FragmentKind::commuting);
  else if (c.method == "lr-f3")
    fs = make_fermion_fragment_set(f3_repartition(low_rank_decompose(p.op), proxy.state).fragments, p.op.constant,
                                   p.hq.n_qubits(), "lr-f3");
  else throw ArgumentError("measure-cost: method must be fc-si or lr-f3");
  r.M_eps = measurement_count(fs, proxy.state, c.epsilon);
  r.n_fragments = fs.size();
  r.gate_counts = circuit_cost(fs);
  emit(c, to_json(r));
  return 0;
}

int cmd_trotter(const Config& c) {
  Problem p = load(c);
  CostReport r = base_report(c, p);
  SymmetrySector ne = electron_sector(c, p);
  FragmentSet fs;
  SymmetrySector desc = ne;
  if (c.method == "fc-si") {
    fs = sorted_insertion(p.hq, FragmentKind::commuting);
    // Pauli groups: ranges in the sector of the Z symmetries fixed by the HF determinant
    desc = sector_from_reference(find_z_symmetries({p.hq}), hf_state(p.hq.n_qubits(), p.ints.n_electrons));
  } else if (c.method == "lr-lcu") {
    fs = make_fermion_fragment_set(lr_lcu_optimize(low_rank_decompose(p.op)).fragments, p.op.constant,
                                   p.hq.n_qubits(), "lr-lcu");
  } else {
    throw ArgumentError("trotter-cost: method must be fc-si or lr-lcu");
  }
  r.kappa_q = kappa_q(fs, ne);
  SpectralDescriptors d = spectral_descriptors(fs, desc);
  r.C = d.C;
  r.S_L = d.S_L;
  r.beta = d.beta;
  r.n_fragments = fs.size();
  // full space unless a sector was asked for
  r.half_spectral_range = half_spectral_range(p.hq, c.sector.empty() ? SymmetrySector{} : ne);
  r.gate_counts = circuit_cost(fs);
  json j = to_json(r);
  TrotterSteps t = trotter_steps(r.kappa_q, c.epsilon, c.p0, 2.0 * r.half_spectral_range);
  j["trotter"] = {{"steps", t.steps}, {"tau", t.tau}, {"error_bound", t.error_bound}, {"p0", c.p0},
                  {"bound", "first order, kappa tau / N_s"}};
  j["units"]["trotter"] = "steps: count, tau: 1/hartree, error_bound: dimensionless";
  emit(c, j);
  return 0;
}

int cmd_lcu(const Config& c) {
  Problem p = load(c);
  CostReport r = base_report(c, p);
  SymmetryShift shift;
  if (c.shift) {
    if (c.method == "ac-si")
      shift = optimize_shift([&](const SymmetryShift& s) {
                return lcu_norm_ac(sorted_insertion(apply_symmetry_shift(p.hq, s), FragmentKind::anticommuting)).lambda;
              }).shift;
    else
      shift = optimize_shift([&](const SymmetryShift& s) {
                return lcu_norm_lr(low_rank_decompose(apply_symmetry_shift(p.op, s))).lambda;
              }).shift;
  }
  PauliPolynomial h = c.shift ? apply_symmetry_shift(p.hq, shift) : p.hq;
  if (c.method == "ac-si") {
    LcuNorm l = lcu_norm_ac(sorted_insertion(h, FragmentKind::anticommuting));
    r.lambda = l.lambda;
    r.n_unitaries = l.count;
  } else if (c.method == "lr") {
    LcuNorm l = lcu_norm_lr(low_rank_decompose(c.shift ? apply_symmetry_shift(p.op, shift) : p.op));
    r.lambda = l.lambda;
    r.n_fragments = l.count;
  } else {
    throw ArgumentError("lcu-cost: method must be ac-si or lr");
  }
  r.half_spectral_range = c.shift ? shifted_half_spectral_range(p.hq).value : half_spectral_range(p.hq);
  json j = to_json(r);
  if (c.shift) j["shift"] = {{"s1", shift.s1}, {"s2", shift.s2}};
  emit(c, j);
  return 0;
}

int cmd_qcc(const Config& c) {
  Problem p = load(c);
  QccOptions o;
  o.schedule = c.nent;
  o.restarts = c.restarts;
  o.batch = c.batch;
  o.seed = c.seed;
  emit(c, to_json(qcc_run(p.hq, p.ints.n_electrons, o), p.molecule, p.geometry));
  return 0;
}

int cmd_exact(const Config& c) {
  Problem p = load(c);
  SymmetrySector s;
  if (!c.sector.empty()) s = electron_sector(c, p);
  DavidsonOptions o;
  o.seed = c.seed;
  auto pairs = eigensolve(p.hq, c.k, s, o);
  json e = json::array();
  for (const auto& x : pairs) e.push_back(x.energy);
  json j;
  j["kind"] = "exact";
  j["molecule"] = p.molecule;
  j["geometry"] = p.geometry;
  j["energies"] = e;
  j["units"] = {{"energies", "hartree"}};
  emit(c, j);
  return 0;
}

int cmd_report(const Config& c) {
  std::vector<json> cells;
  for (const auto& f : c.reports) {
    std::ifstream in(f);
    if (!in) throw MissingFixture("report file not found: " + f);
    auto v = read_jsonl(in);
    cells.insert(cells.end(), v.begin(), v.end());
  }
  json t = collate_tables(cells);
  if (c.out.empty()) std::cout << t.dump(2) << '\n';
  else std::ofstream(c.out) << t.dump(2) << '\n';
  if (!c.csv.empty()) std::ofstream(c.csv) << collate_csv(cells);
  return 0;
}

void error_record(const std::string& type, const std::string& what) {
  json j = {{"kind", "error"}, {"type", type}, {"message", what}};
  std::cerr << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qres: resource estimates for molecular Hamiltonians"};
  app.require_subcommand(1);
  Config c;
  auto common = [&](CLI::App* s, bool fixture = true) {
    if (fixture) s->add_option("fixture", c.fixture, "FCIDUMP file")->required();
    s->add_option("--epsilon", c.epsilon, "target accuracy (hartree)");
    s->add_flag("--shift", c.shift, "apply the optimized N, N^2 symmetry shift");
    s->add_option("--sector", c.sector, "ne=<int>");
    s->add_option("--seed", c.seed);
    s->add_option("--out", c.out, "append JSON lines here instead of stdout");
    s->add_flag("--dump-pauli", c.dump_pauli, "write the qubit Hamiltonian next to the fixture");
    s->add_flag("--large", c.large, "allow fixtures above 8 qubits");
  };
  auto* part = app.add_subcommand("partition", "fragment the Hamiltonian");
  common(part);
  part->add_option("--method", c.method)->required()->check(CLI::IsMember({"fc-si", "ac-si", "lr", "lr-lcu"}));
  auto* meas = app.add_subcommand("measure-cost", "measurement count M(eps)");
  common(meas);
  meas->add_option("--method", c.method)->required()->check(CLI::IsMember({"fc-si", "lr-f3"}));
  auto* trot = app.add_subcommand("trotter-cost", "kappa_Q, descriptors and step count");
  common(trot);
  trot->add_option("--method", c.method)->required()->check(CLI::IsMember({"fc-si", "lr-lcu"}));
  trot->add_option("--p0", c.p0, "ground-state overlap");
  auto* lcu = app.add_subcommand("lcu-cost", "LCU 1-norm");
  common(lcu);
  lcu->add_option("--method", c.method)->required()->check(CLI::IsMember({"ac-si", "lr"}));
  auto* qcc = app.add_subcommand("qcc", "QCC energies and overlaps");
  common(qcc);
  qcc->add_option("--nent", c.nent, "entangler counts")->delimiter(',');
  qcc->add_option("--restarts", c.restarts);
  qcc->add_option("--iqcc-batch", c.batch);
  auto* ex = app.add_subcommand("exact", "lowest eigenvalues");
  common(ex);
  ex->add_option("--k", c.k);
  auto* rep = app.add_subcommand("report", "collate JSON-lines reports");
  rep->add_option("files", c.reports)->required();
  rep->add_option("--out", c.out);
  rep->add_option("--csv", c.csv);

  CLI11_PARSE(app, argc, argv);
  std::cout.precision(17);
  try {
    if (*part) return cmd_partition(c);
    if (*meas) return cmd_measure(c);
    if (*trot) return cmd_trotter(c);
    if (*lcu) return cmd_lcu(c);
    if (*qcc) return cmd_qcc(c);
    if (*ex) return cmd_exact(c);
    if (*rep) return cmd_report(c);
  } catch (const MissingFixture& e) {
    error_record("missing_fixture", e.what());
    return 2;
  } catch (const SolverError& e) {
    error_record("solver", e.what());
    return 3;
  } catch (const Error& e) {
    error_record("error", e.what());
    return 1;
  }
  return 1;
}
