#include "slwave/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "slwave/errors.hpp"

namespace slwave {

namespace {

void write_row(std::ostream& out, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out << ',';
    out << v;
    first = false;
  }
  out << '\n';
}

}  // namespace

Samples sample_solution(const FeSpace& space, std::span<const double> sigma,
                        std::span<const double> sigma_dot, int M) {
  if (M < 1) throw std::invalid_argument("sample_solution: M must be >= 1");
  Samples s;
  s.x.resize(M + 1);
  s.sigma.resize(M + 1);
  s.sigma_dot.resize(M + 1);
  for (int i = 0; i <= M; ++i) {
    const double x = (i == M) ? space.x_right() : space.x_left() + space.length() * i / M;
    s.x[i] = x;
    s.sigma[i] = space.evaluate(sigma, x);
    s.sigma_dot[i] = sigma_dot.empty() ? 0.0 : space.evaluate(sigma_dot, x);
  }
  return s;
}

SnapshotRecord reconstruct(const Samples& samples, const MaterialParams& p) {
  const std::size_t n = samples.x.size();
  if (n < 2 || samples.sigma.size() != n || samples.sigma_dot.size() != n)
    throw std::invalid_argument("reconstruct: inconsistent sample arrays");
  const double dx = (samples.x.back() - samples.x.front()) / static_cast<double>(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(samples.x[i] - samples.x[i - 1] - dx) > 1e-9 * std::abs(dx))
      throw std::invalid_argument("reconstruct: samples must be uniformly spaced");
  }

  SnapshotRecord r;
  r.x = samples.x;
  r.sigma = samples.sigma;
  r.sigma_dot = samples.sigma_dot;
  r.u.assign(n, 0.0);
  r.v.assign(n, 0.0);
  r.eps.resize(n);
  r.c.resize(n);

  std::vector<double> eps_rate(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ComplianceJet jet = compliance_jet(samples.sigma[i], p);
    if (!(jet.d1 > 0.0)) {
      std::ostringstream msg;
      msg << "hyperbolicity lost at sample x = " << samples.x[i];
      throw HyperbolicityError(msg.str(), samples.sigma[i], samples.x[i]);
    }
    r.eps[i] = jet.f;
    eps_rate[i] = jet.d1 * samples.sigma_dot[i];
    r.c[i] = wave_speed(samples.sigma[i], p);
  }
  for (std::size_t i = 1; i < n; ++i) {
    r.u[i] = r.u[i - 1] + 0.5 * (r.eps[i] + r.eps[i - 1]) * dx;
    r.v[i] = r.v[i - 1] + 0.5 * (eps_rate[i] + eps_rate[i - 1]) * dx;
  }
  return r;
}

double max_abs_gradient(const Samples& samples) {
  double g = 0.0;
  for (std::size_t i = 1; i < samples.x.size(); ++i)
    g = std::max(g, std::abs(samples.sigma[i] - samples.sigma[i - 1]) /
                        (samples.x[i] - samples.x[i - 1]));
  return g;
}

std::string snapshot_filename(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snapshot_t%.6f.csv", t);
  return buf;
}

std::filesystem::path write_snapshot(const SnapshotRecord& record, double t,
                                     const std::filesystem::path& directory) {
  const std::filesystem::path path = directory / snapshot_filename(t);
  std::ofstream out(path);
  if (!out) throw IoError("cannot open snapshot file for writing: " + path.string());
  out.precision(17);
  out << "x,sigma,u,v,eps,c\n";
  for (std::size_t i = 0; i < record.size(); ++i)
    write_row(out, {record.x[i], record.sigma[i], record.u[i], record.v[i], record.eps[i],
                    record.c[i]});
  out.close();
  if (!out) throw IoError("failed writing snapshot file: " + path.string());
  return path;
}

SnapshotRecord read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open snapshot file: " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != "x,sigma,u,v,eps,c") throw IoError("unexpected snapshot header in " + path.string());

  SnapshotRecord r;
  std::vector<double>* cols[] = {&r.x, &r.sigma, &r.u, &r.v, &r.eps, &r.c};
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    for (auto* col : cols) {
      if (!std::getline(row, cell, ','))
        throw IoError("short row in snapshot file " + path.string());
      col->push_back(std::strtod(cell.c_str(), nullptr));
    }
  }
  return r;
}

SpaceTimeWriter::SpaceTimeWriter(const std::filesystem::path& path) : path_(path), out_(path) {
  if (!out_) throw IoError("cannot open space-time file: " + path.string());
  out_.precision(17);
  out_ << "t,x,sigma,u,v,eps,c\n";
}

void SpaceTimeWriter::append(const SnapshotRecord& record, double t) {
  for (std::size_t i = 0; i < record.size(); ++i)
    write_row(out_, {t, record.x[i], record.sigma[i], record.u[i], record.v[i], record.eps[i],
                     record.c[i]});
  if (!out_) throw IoError("failed writing space-time file: " + path_.string());
}

}  // namespace slwave
