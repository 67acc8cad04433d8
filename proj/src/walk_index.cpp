#include "fora/walk_index.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "fora/errors.hpp"

namespace fora {

static_assert(std::endian::native == std::endian::little,
              "index serialization assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'F', 'O', 'R', 'A', 'I', 'D', 'X', '1'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 8 + 4 + 8 + 8 + 5 * 8 + 8 + 1;

template <typename T>
void put(std::string& out, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.append(bytes, sizeof(T));
}

template <typename T>
T get(std::string_view bytes, std::size_t& pos) {
  T value;
  std::memcpy(&value, bytes.data() + pos, sizeof(T));
  pos += sizeof(T);
  return value;
}

std::uint32_t crc_of(std::string_view bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    const auto len = static_cast<uInt>(
        std::min<std::size_t>(bytes.size() - pos, 1u << 30));
    crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data() + pos), len);
    pos += len;
  }
  return static_cast<std::uint32_t>(crc);
}

double walks_per_degree(const QueryParams& params, double r_max,
                        bool zero_hop) {
  const double scale = zero_hop ? 1.0 - params.alpha() : 1.0;
  return scale * r_max * params.walk_density();
}

}  // namespace

std::uint64_t omega_max(const Graph& g, NodeId v, const QueryParams& params,
                        double r_max, bool zero_hop) {
  const double scale = zero_hop ? 1.0 - params.alpha() : 1.0;
  const double mass =
      scale * static_cast<double>(g.out_degree(v)) * r_max;
  return walks_for_mass(mass, params.walk_density());
}

WalkIndex build_index(const Graph& g, const QueryParams& params, double r_max,
                      std::uint64_t seed, bool zero_hop, Execution exec) {
  if (!(r_max > 0.0)) throw usage_error("index: r_max must be positive");
  const std::size_t n = g.num_nodes();
  WalkIndex index;
  index.meta = {n,          g.num_edges(),   params.alpha(),
                params.epsilon(), params.delta(), params.p_f(),
                r_max,      seed,            zero_hop};
  index.offsets.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) {
    index.offsets[v + 1] =
        index.offsets[v] +
        omega_max(g, static_cast<NodeId>(v), params, r_max, zero_hop);
  }
  const std::uint64_t total = index.offsets.back();
  index.destinations.resize(total);
  const OnlineWalks walks(g, params.alpha(), WalkRng(seed), zero_hop);
  std::span<NodeId> dest(index.destinations);

  if (exec == Execution::kSerial) {
    for (std::size_t v = 0; v < n; ++v) {
      walks.fill(static_cast<NodeId>(v), 0,
                 dest.subspan(index.offsets[v],
                              index.offsets[v + 1] - index.offsets[v]));
    }
    return index;
  }

  constexpr std::int64_t kChunk = 4096;
  const auto chunks = static_cast<std::int64_t>((total + kChunk - 1) / kChunk);
  const auto& offsets = index.offsets;
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t c = 0; c < chunks; ++c) {
    const std::uint64_t lo = static_cast<std::uint64_t>(c) * kChunk;
    const std::uint64_t hi = std::min<std::uint64_t>(total, lo + kChunk);
    auto it = std::upper_bound(offsets.begin(), offsets.end(), lo);
    std::size_t v = static_cast<std::size_t>(it - offsets.begin()) - 1;
    std::uint64_t pos = lo;
    while (pos < hi) {
      const std::uint64_t end = std::min(hi, offsets[v + 1]);
      if (end > pos) {
        walks.fill(static_cast<NodeId>(v), pos - offsets[v],
                   dest.subspan(pos, end - pos));
      }
      pos = end;
      ++v;
    }
  }
  return index;
}

void IndexedWalks::fill(NodeId v, std::uint64_t first,
                        std::span<NodeId> out) const {
  if (g_.is_dangling(v)) {
    std::fill(out.begin(), out.end(), v);
    return;
  }
  const auto slice = index_.slice(v);
  if (first + out.size() > slice.size()) {
    throw invariant_error("index: node " + std::to_string(v) + " needs " +
                          std::to_string(first + out.size()) +
                          " walks but stores " +
                          std::to_string(slice.size()));
  }
  std::copy_n(slice.begin() + static_cast<std::ptrdiff_t>(first), out.size(),
              out.begin());
}

bool index_covers(const WalkIndex& index, const Graph& g,
                  const QueryParams& params, double r_max, bool zero_hop) {
  const IndexMeta& meta = index.meta;
  if (meta.n != g.num_nodes() || meta.m != g.num_edges() ||
      meta.alpha != params.alpha() || meta.zero_hop != zero_hop) {
    return false;
  }
  const QueryParams built(meta.alpha, meta.epsilon, meta.delta, meta.p_f);
  const double have = walks_per_degree(built, meta.r_max, meta.zero_hop);
  const double need = walks_per_degree(params, r_max, zero_hop);
  return need <= have * (1.0 + 1e-9);
}

PprEstimate query_with_index(const Graph& g, const WalkIndex& index,
                             NodeId source, const QueryParams& params,
                             Execution exec) {
  const IndexMeta& meta = index.meta;
  if (meta.n != g.num_nodes() || meta.m != g.num_edges()) {
    throw format_error("index: built for a different graph");
  }
  if (meta.alpha != params.alpha() || meta.epsilon != params.epsilon() ||
      meta.delta != params.delta() || meta.p_f != params.p_f()) {
    throw format_error("index: built for different query parameters");
  }
  if (!g.valid_node(source)) throw usage_error("index query: bad source");
  const IndexedWalks walks(g, index);
  if (meta.zero_hop) {
    return whole_graph_zero_hop_trace(g, source, params, meta.r_max, walks,
                                      exec)
        .estimate;
  }
  return whole_graph_trace(g, source, params, meta.r_max, walks, exec)
      .estimate;
}

double index_size_bound(const Graph& g, const QueryParams& params) {
  const auto n = static_cast<double>(g.num_nodes());
  const auto m = static_cast<double>(g.num_edges());
  const double eps = params.epsilon();
  const double walk_term =
      std::sqrt(m) / (eps * std::sqrt(params.delta())) *
      std::sqrt((2.0 * eps / 3.0 + 2.0) * params.log_term());
  return std::min(n + walk_term, m) + n;
}

std::string serialize_index(const WalkIndex& index) {
  const IndexMeta& meta = index.meta;
  std::string out;
  out.reserve(kHeaderBytes + 8 * index.offsets.size() +
              4 * index.destinations.size() + 4);
  out.append(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kVersion);
  put<std::uint64_t>(out, meta.n);
  put<std::uint64_t>(out, meta.m);
  put<double>(out, meta.alpha);
  put<double>(out, meta.epsilon);
  put<double>(out, meta.delta);
  put<double>(out, meta.p_f);
  put<double>(out, meta.r_max);
  put<std::uint64_t>(out, meta.seed);
  put<std::uint8_t>(out, meta.zero_hop ? 1 : 0);
  for (std::uint64_t off : index.offsets) put<std::uint64_t>(out, off);
  for (NodeId d : index.destinations) put<std::uint32_t>(out, d);
  put<std::uint32_t>(out, crc_of(out));
  return out;
}

WalkIndex deserialize_index(std::string_view bytes) {
  if (bytes.size() < sizeof(kMagic) ||
      std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw format_error("index: bad magic");
  }
  if (bytes.size() < kHeaderBytes) throw format_error("index: truncated file");
  std::size_t pos = sizeof(kMagic);
  const auto version = get<std::uint32_t>(bytes, pos);
  if (version != kVersion) {
    throw format_error("index: unsupported version " +
                       std::to_string(version));
  }
  WalkIndex index;
  IndexMeta& meta = index.meta;
  meta.n = get<std::uint64_t>(bytes, pos);
  meta.m = get<std::uint64_t>(bytes, pos);
  meta.alpha = get<double>(bytes, pos);
  meta.epsilon = get<double>(bytes, pos);
  meta.delta = get<double>(bytes, pos);
  meta.p_f = get<double>(bytes, pos);
  meta.r_max = get<double>(bytes, pos);
  meta.seed = get<std::uint64_t>(bytes, pos);
  const auto flag = get<std::uint8_t>(bytes, pos);
  if (flag > 1) throw format_error("index: bad zero-hop flag");
  meta.zero_hop = flag == 1;

  const std::size_t remaining = bytes.size() - pos;
  if (meta.n >= remaining / 8) throw format_error("index: truncated file");
  const std::size_t offset_bytes = 8 * (meta.n + 1);
  std::size_t peek = pos + offset_bytes - 8;
  const auto total = get<std::uint64_t>(bytes, peek);
  if (total > (bytes.size() - pos - offset_bytes) / 4) {
    throw format_error("index: truncated file");
  }
  const std::size_t expected = pos + offset_bytes + 4 * total + 4;
  if (bytes.size() < expected) throw format_error("index: truncated file");
  if (bytes.size() > expected) throw format_error("index: trailing bytes");

  std::size_t crc_pos = expected - 4;
  const auto stored_crc = get<std::uint32_t>(bytes, crc_pos);
  if (stored_crc != crc_of(bytes.substr(0, expected - 4))) {
    throw format_error("index: checksum mismatch");
  }

  index.offsets.resize(meta.n + 1);
  for (auto& off : index.offsets) off = get<std::uint64_t>(bytes, pos);
  if (index.offsets.front() != 0) throw format_error("index: bad offsets");
  for (std::size_t v = 1; v < index.offsets.size(); ++v) {
    if (index.offsets[v] < index.offsets[v - 1]) {
      throw format_error("index: bad offsets");
    }
  }
  index.destinations.resize(total);
  for (auto& d : index.destinations) {
    d = get<std::uint32_t>(bytes, pos);
    if (d >= meta.n) throw format_error("index: destination out of range");
  }
  return index;
}

void save_index(const WalkIndex& index, const std::filesystem::path& path) {
  const std::string bytes = serialize_index(index);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot write index " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw io_error("failed writing index " + path.string());
}

WalkIndex load_index(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open index " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (in.bad()) throw io_error("failed reading index " + path.string());
  return deserialize_index(bytes);
}

}  // namespace fora
