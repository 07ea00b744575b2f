#include "svstokes/mesh.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace svstokes {

namespace {

struct LineReader {
  std::istream &in;
  std::size_t line_no = 0;

  // Next non-empty line with comments stripped, split on whitespace.
  bool next(std::vector<std::string> &tokens) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string::npos)
        line.erase(hash);
      std::istringstream ss(line);
      tokens.clear();
      for (std::string tok; ss >> tok;)
        tokens.push_back(tok);
      if (!tokens.empty())
        return true;
    }
    ++line_no;
    return false;
  }
};

template <class T> T parse_number(const std::string &tok, std::size_t line, const char *what) {
  T value{};
  const char *first = tok.data(), *last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw ParseError(line, std::string("expected ") + what + ", got '" + tok + "'");
  return value;
}

void expect_tokens(const std::vector<std::string> &tokens, std::size_t n, std::size_t line,
                   const char *what) {
  if (tokens.size() != n)
    throw ParseError(line, std::string(what) + ": expected " + std::to_string(n) +
                               " fields, got " + std::to_string(tokens.size()));
}

} // namespace

Triangulation read_mesh(std::istream &in) {
  LineReader reader{in};
  std::vector<std::string> tok;
  if (!reader.next(tok))
    throw ParseError(reader.line_no, "missing mesh2d header");
  if (tok.size() != 4 || tok[0] != "mesh2d")
    throw ParseError(reader.line_no, "malformed header, expected 'mesh2d <nv> <nt> <nb>'");
  const auto nv = parse_number<long>(tok[1], reader.line_no, "vertex count");
  const auto nt = parse_number<long>(tok[2], reader.line_no, "triangle count");
  const auto nb = parse_number<long>(tok[3], reader.line_no, "boundary edge count");
  if (nv < 0 || nt < 0 || nb < 0)
    throw ParseError(reader.line_no, "negative count in header");
  if (nt == 0)
    throw ParseError(reader.line_no, "empty mesh");

  std::vector<Vec2> verts;
  verts.reserve(nv);
  for (long i = 0; i < nv; ++i) {
    if (!reader.next(tok))
      throw ParseError(reader.line_no, "unexpected end of input in vertex block");
    expect_tokens(tok, 2, reader.line_no, "vertex");
    verts.push_back({parse_number<double>(tok[0], reader.line_no, "coordinate"),
                     parse_number<double>(tok[1], reader.line_no, "coordinate")});
  }

  auto index = [&](const std::string &s) {
    const long v = parse_number<long>(s, reader.line_no, "vertex index");
    if (v < 0 || v >= nv)
      throw ParseError(reader.line_no, "vertex index " + s + " out of range [0, " +
                                           std::to_string(nv) + ")");
    return static_cast<int>(v);
  };

  std::vector<std::array<int, 3>> tris;
  tris.reserve(nt);
  for (long i = 0; i < nt; ++i) {
    if (!reader.next(tok))
      throw ParseError(reader.line_no, "unexpected end of input in triangle block");
    expect_tokens(tok, 3, reader.line_no, "triangle");
    tris.push_back({index(tok[0]), index(tok[1]), index(tok[2])});
  }

  std::vector<BoundaryEdge> bnd;
  bnd.reserve(nb);
  for (long i = 0; i < nb; ++i) {
    if (!reader.next(tok))
      throw ParseError(reader.line_no, "unexpected end of input in boundary block");
    expect_tokens(tok, 3, reader.line_no, "boundary edge");
    const int a = index(tok[0]), b = index(tok[1]);
    const long marker = parse_number<long>(tok[2], reader.line_no, "boundary marker");
    if (marker < 0)
      throw ParseError(reader.line_no, "boundary marker must be nonnegative");
    bnd.push_back({{a, b}, static_cast<int>(marker)});
  }
  if (reader.next(tok))
    throw ParseError(reader.line_no, "trailing data after boundary block");

  return Triangulation(std::move(verts), std::move(tris), std::move(bnd));
}

Triangulation read_mesh(const std::string &text) {
  std::istringstream in(text);
  return read_mesh(in);
}

void write_mesh(std::ostream &out, const Triangulation &tri) {
  out << "mesh2d " << tri.n_vertices() << ' ' << tri.n_triangles() << ' '
      << tri.boundary_edges().size() << '\n';
  char buf[64];
  for (const auto &p : tri.vertices()) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p.x, p.y);
    out << buf;
  }
  for (const auto &t : tri.triangles())
    out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (const auto &e : tri.boundary_edges())
    out << e.v[0] << ' ' << e.v[1] << ' ' << e.marker << '\n';
}

std::string write_mesh(const Triangulation &tri) {
  std::ostringstream out;
  write_mesh(out, tri);
  return out.str();
}

} // namespace svstokes
