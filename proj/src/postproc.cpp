// Copyright The airgap authors.
// SPDX-License-Identifier: Apache-2.0

#include "airgap/postproc.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include "airgap/error.hpp"

namespace airgap
{

namespace
{

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void CheckRadius(const AirGapGeometry &g, double r)
{
  if (!(r >= g.rho_rt * (1.0 - 1e-12) && r <= g.r_st * (1.0 + 1e-12)))
  {
    Throw(ErrorCode::Domain, "radius " + std::to_string(r) + " lies outside the air gap [" +
                                 std::to_string(g.rho_rt) + ", " + std::to_string(g.r_st) + "]");
  }
}

void CheckShape(const GapCoefficients &c)
{
  if (c.a.size() != c.set.Size() || c.b.size() != c.set.Size())
  {
    Throw(ErrorCode::InvalidArgument, "gap coefficient arrays do not match the harmonic set");
  }
}

int DefaultQuadrature(const GapCoefficients &c, int n_quad)
{
  return n_quad > 0 ? n_quad : 8 * c.set.Max();
}

std::string Format17(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

GapCoefficients SolveGapCoefficients(std::span<const Complex> c_st, std::span<const Complex> c_rt,
                                     const HarmonicSet &set, const AirGapGeometry &geometry,
                                     Complex eps)
{
  geometry.Validate();
  const std::size_t n = set.Size();
  if (c_st.size() != n || c_rt.size() != n)
  {
    Throw(ErrorCode::InvalidArgument, "boundary coefficients do not match the harmonic set");
  }
  GapCoefficients out{set, std::vector<Complex>(n), std::vector<Complex>(n)};
  const double log_xi = std::log(geometry.Xi());
  if (eps == Complex(0.0))
  {
    for (std::size_t i = 0; i < n; i++)
    {
      const double q = std::exp(-set[i] * log_xi);
      const double den = -std::expm1(-2.0 * set[i] * log_xi);
      out.a[i] = (q * c_st[i] - q * q * c_rt[i]) / den;
      out.b[i] = (c_rt[i] - q * c_st[i]) / den;
    }
    return out;
  }

  // Stator rows scaled by xi^-l so that no block entry overflows.
  BlockTridiagonal T = MakeEccentricBlocks(set, geometry, eps).T;
  std::vector<Complex> rhs(2 * n), x(2 * n);
  for (std::size_t i = 0; i < n; i++)
  {
    const double q = std::exp(-set[i] * log_xi);
    T.Diag(i)[0] = {Complex(1.0), Complex(q * q)};
    rhs[2 * i] = q * c_st[i];
    rhs[2 * i + 1] = c_rt[i];
  }
  T.Solve(rhs, x);
  for (std::size_t i = 0; i < n; i++)
  {
    out.a[i] = x[2 * i];
    out.b[i] = x[2 * i + 1];
  }
  return out;
}

GapCoefficients ComputeGapCoefficients(const AirGapOperator &op, std::span<const double> u_st,
                                       std::span<const double> u_rt)
{
  std::vector<Complex> c_st, c_rt;
  op.GapFrameCoefficients(u_st, u_rt, c_st, c_rt);
  return SolveGapCoefficients(c_st, c_rt, op.Harmonics(), op.Geometry(), op.Motion().eps);
}

double ReconstructPotential(const GapCoefficients &c, const AirGapGeometry &g, double r,
                            double theta)
{
  CheckShape(c);
  CheckRadius(g, r);
  const double x = r / g.rho_rt;
  double A = 0.0;
  for (std::size_t i = 0; i < c.set.Size(); i++)
  {
    const int l = c.set[i];
    const Complex radial = c.a[i] * std::pow(x, l) + c.b[i] * std::pow(x, -l);
    A += 2.0 * std::real(radial * std::polar(1.0, -l * theta));
  }
  return A;
}

Flux ReconstructFlux(const GapCoefficients &c, const AirGapGeometry &g, double r, double theta)
{
  CheckShape(c);
  CheckRadius(g, r);
  const double x = r / g.rho_rt;
  Flux f;
  for (std::size_t i = 0; i < c.set.Size(); i++)
  {
    const int l = c.set[i];
    const Complex up = c.a[i] * std::pow(x, l), down = c.b[i] * std::pow(x, -l);
    const Complex e = std::polar(1.0, -l * theta);
    f.br += 2.0 * std::real(Complex(0.0, -l) * (up + down) * e) / r;
    f.btheta -= 2.0 * std::real(double(l) * (up - down) * e) / r;
  }
  return f;
}

double TorqueHarmonic(const GapCoefficients &c, const AirGapGeometry &g)
{
  CheckShape(c);
  double s = 0.0;
  for (std::size_t i = 0; i < c.set.Size(); i++)
  {
    const double l = c.set[i];
    s += l * l * std::imag(std::conj(c.a[i]) * c.b[i]);
  }
  return -4.0 * kTwoPi * g.nu0 * g.ell_z * s;
}

double TorqueQuadrature(const GapCoefficients &c, const AirGapGeometry &g, double r_c,
                        int n_quad)
{
  CheckShape(c);
  const double r = r_c > 0.0 ? r_c : std::sqrt(g.r_st * g.rho_rt);
  CheckRadius(g, r);
  const int n = DefaultQuadrature(c, n_quad);
  double s = 0.0;
  for (int k = 0; k < n; k++)
  {
    const Flux f = ReconstructFlux(c, g, r, kTwoPi * k / n);
    s += f.br * f.btheta;
  }
  return g.nu0 * g.ell_z * r * r * s * kTwoPi / n;
}

Complex UmpForce(const GapCoefficients &c, const AirGapGeometry &g)
{
  CheckShape(c);
  Complex s = 0.0;
  for (std::size_t i = 0; i + 1 < c.set.Size(); i++)
  {
    const int m = c.set[i];
    if (c.set[i + 1] == m + 1)
    {
      s += double(m) * (m + 1.0) * c.a[i + 1] * std::conj(c.b[i]);
    }
  }
  return 4.0 * kTwoPi * g.ell_z * g.nu0 / g.rho_rt * s;
}

Complex UmpQuadrature(const GapCoefficients &c, const AirGapGeometry &g, double r, int n_quad)
{
  CheckShape(c);
  const double rr = r > 0.0 ? r : std::sqrt(g.r_st * g.rho_rt);
  CheckRadius(g, rr);
  const int n = DefaultQuadrature(c, n_quad);
  Complex s = 0.0;
  for (int k = 0; k < n; k++)
  {
    const double th = kTwoPi * k / n;
    const Flux f = ReconstructFlux(c, g, rr, th);
    const Complex B(f.br, f.btheta);
    s += B * B * std::polar(1.0, th);
  }
  return g.ell_z * 0.5 * g.nu0 * rr * s * (kTwoPi / n);
}

void WriteCsv(const std::vector<ForceTorqueSample> &samples, const std::filesystem::path &path,
              const std::string &provenance)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
  {
    Throw(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  }
  if (!provenance.empty())
  {
    out << "# " << provenance << '\n';
  }
  out << kCsvHeader << '\n';
  for (const auto &s : samples)
  {
    out << Format17(s.t) << ',' << Format17(s.alpha) << ',' << Format17(s.d_ecc) << ','
        << Format17(s.gamma_ecc) << ',' << Format17(s.torque) << ',' << Format17(s.fx) << ','
        << Format17(s.fy) << ',' << s.iterations << '\n';
  }
  if (!out)
  {
    Throw(ErrorCode::Io, "write to " + path.string() + " failed");
  }
}

std::vector<ForceTorqueSample> ReadCsv(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    Throw(ErrorCode::Io, "cannot open " + path.string());
  }
  std::vector<ForceTorqueSample> out;
  std::string line;
  bool header = false;
  int number = 0;
  while (std::getline(in, line))
  {
    number++;
    if (line.empty() || line[0] == '#')
    {
      continue;
    }
    if (!header)
    {
      if (line != kCsvHeader)
      {
        Throw(ErrorCode::Parse, path.string() + ": unexpected CSV header");
      }
      header = true;
      continue;
    }
    std::istringstream ss(line);
    ForceTorqueSample s;
    char c1, c2, c3, c4, c5, c6, c7;
    ss >> s.t >> c1 >> s.alpha >> c2 >> s.d_ecc >> c3 >> s.gamma_ecc >> c4 >> s.torque >> c5 >>
        s.fx >> c6 >> s.fy >> c7 >> s.iterations;
    if (!ss || c1 != ',' || c2 != ',' || c3 != ',' || c4 != ',' || c5 != ',' || c6 != ',' ||
        c7 != ',')
    {
      Throw(ErrorCode::Parse, path.string() + ": line " + std::to_string(number) +
                                  ": malformed CSV row");
    }
    out.push_back(s);
  }
  if (!header)
  {
    Throw(ErrorCode::Parse, path.string() + ": missing CSV header");
  }
  return out;
}

void WriteVtk(const Mesh &mesh, std::span<const double> az, const std::filesystem::path &path,
              const std::string &title)
{
  if (az.size() != mesh.NumNodes())
  {
    Throw(ErrorCode::InvalidArgument, "nodal field size does not match the mesh");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out)
  {
    Throw(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  }
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.NumNodes() << " double\n";
  for (const auto &p : mesh.Nodes())
  {
    out << Format17(p.x) << ' ' << Format17(p.y) << " 0\n";
  }
  out << "CELLS " << mesh.NumTriangles() << ' ' << 4 * mesh.NumTriangles() << '\n';
  for (const auto &t : mesh.Triangles())
  {
    out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  }
  out << "CELL_TYPES " << mesh.NumTriangles() << '\n';
  for (std::size_t t = 0; t < mesh.NumTriangles(); t++)
  {
    out << "5\n";
  }
  out << "POINT_DATA " << mesh.NumNodes() << "\nSCALARS Az double 1\nLOOKUP_TABLE default\n";
  for (double v : az)
  {
    out << Format17(v) << '\n';
  }
  if (!out)
  {
    Throw(ErrorCode::Io, "write to " + path.string() + " failed");
  }
}

}  // namespace airgap
