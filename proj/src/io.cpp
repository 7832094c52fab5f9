#include "forage/io.hpp"

#include <fmt/format.h>

#include <bit>
#include <charconv>
#include <cstring>
#include <sstream>
#include <string_view>

namespace forage::io {

static_assert(std::endian::native == std::endian::little,
              "checkpoint encoding assumes a little-endian host");

std::string record_row(const StepRecord& r) {
  return fmt::format("{},{},{},{},{},{},{},{},{}", r.step, r.agents, r.resources, r.mean_energy,
                     r.min_energy, r.max_energy, r.total_resource, r.births, r.deaths);
}

RecordWriter::RecordWriter(const std::filesystem::path& path) : out_(path, std::ios::binary) {
  if (!out_) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  out_ << kRecordHeader << '\n';
  out_.flush();
}

void RecordWriter::write(const StepRecord& r) {
  out_ << record_row(r) << '\n';
  if (!out_) throw std::runtime_error("record write failed");
}

std::string frame_text(const SimState& state) {
  std::string out = kFrameHeader;
  out += '\n';
  const AgentSet& a = state.agents;
  for (std::size_t i = 0; i < a.capacity(); ++i)
    if (a.active[i])
      out += fmt::format("agent,{},{},{},{},{},{}\n", a.uid[i], a.px[i], a.py[i], a.vx[i], a.vy[i],
                         a.energy[i]);
  const ResourceSet& r = state.resources;
  for (std::size_t n = 0; n < r.capacity(); ++n)
    if (r.active[n]) out += fmt::format("resource,{},{},{},0,0,{}\n", n, r.px[n], r.py[n], r.value[n]);
  return out;
}

std::string frame_filename(std::uint64_t index) { return fmt::format("frame_{:06d}.csv", index); }

void write_frame(const std::filesystem::path& dir, const SimState& state, std::uint64_t index) {
  const auto path = dir / frame_filename(index);
  std::ofstream out(path, std::ios::binary);
  out << frame_text(state);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
}

FrameParseError::FrameParseError(std::string file, std::size_t line, const std::string& what)
    : std::runtime_error(fmt::format("{}:{}: {}", file, line, what)),
      file_(std::move(file)),
      line_(line) {}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

Frame parse_frame(const std::string& text, const std::string& name) {
  Frame frame;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  if (!std::getline(in, line) || (++number, line != kFrameHeader))
    throw FrameParseError(name, 1, "missing or wrong header");
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 7) throw FrameParseError(name, number, "expected 7 fields");
    std::uint64_t id = 0;
    double v[5];
    bool ok = parse_number(f[1], id);
    for (int k = 0; k < 5; ++k) ok = ok && parse_number(f[2 + k], v[k]);
    if (!ok) throw FrameParseError(name, number, "malformed number");
    if (f[0] == "agent") frame.agents.push_back({id, v[0], v[1], v[2], v[3], v[4]});
    else if (f[0] == "resource") frame.resources.push_back({id, v[0], v[1], v[4]});
    else throw FrameParseError(name, number, fmt::format("unknown kind '{}'", f[0]));
  }
  return frame;
}

Frame read_frame(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FrameParseError(path.string(), 0, "cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_frame(buf.str(), path.string());
}

namespace {

class Writer {
 public:
  template <class T>
  void put(const T& v) {
    static_assert(std::is_trivially_copyable_v<T>);
    const auto* p = reinterpret_cast<const char*>(&v);
    out.append(p, sizeof(T));
  }
  template <class T>
  void put_array(const std::vector<T>& v) {
    put<std::uint64_t>(v.size());
    out.append(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(T));
  }
  std::string out;
};

class Reader {
 public:
  explicit Reader(const std::string& bytes) : data_(bytes) {}

  template <class T>
  T get() {
    T v;
    need(sizeof(T));
    std::memcpy(&v, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  template <class T>
  void get_array(std::vector<T>& v, std::size_t expected) {
    const auto n = get<std::uint64_t>();
    if (n != expected) throw CheckpointError("checkpoint array shape does not match config");
    need(n * sizeof(T));
    std::memcpy(v.data(), data_.data() + pos_, n * sizeof(T));
    pos_ += n * sizeof(T);
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw CheckpointError("checkpoint truncated");
  }
  const std::string& data_;
  std::size_t pos_ = 0;
};

/// Hash of every field that shapes the state; the run length is left out so a
/// checkpoint can be resumed with a different --steps.
std::uint64_t state_hash(SimConfig config) {
  config.n_steps = 0;
  return config_hash(config);
}

}  // namespace

std::string checkpoint_bytes(const SimState& s, const SimConfig& config) {
  Writer w;
  w.out.append(kCheckpointMagic, sizeof(kCheckpointMagic));
  w.put(kCheckpointVersion);
  w.put(state_hash(config));
  w.put(s.step);
  w.put(s.stats.births);
  w.put(s.stats.deaths);
  w.put(s.stats.total_harvested);
  w.put(s.stats.total_harvest_energy);
  w.put(s.stats.total_death_energy);

  const AgentSet& a = s.agents;
  w.put<std::uint64_t>(a.capacity());
  w.put<std::uint64_t>(a.n_neurons());
  w.put<std::uint64_t>(a.n_params());
  w.put(a.next_uid);
  w.put(a.overflow_count);
  w.put_array(a.active);
  w.put_array(a.uid);
  w.put_array(a.px);
  w.put_array(a.py);
  w.put_array(a.vx);
  w.put_array(a.vy);
  w.put_array(a.energy);
  w.put_array(a.rates);
  w.put_array(a.params);

  const ResourceSet& r = s.resources;
  w.put<std::uint64_t>(r.capacity());
  w.put_array(r.active);
  w.put_array(r.px);
  w.put_array(r.py);
  w.put_array(r.value);
  return std::move(w.out);
}

SimState parse_checkpoint(const std::string& bytes, const SimConfig& config) {
  if (bytes.size() < sizeof(kCheckpointMagic) ||
      std::memcmp(bytes.data(), kCheckpointMagic, sizeof(kCheckpointMagic)) != 0)
    throw CheckpointError("not a checkpoint (bad magic)");
  Reader r(bytes);
  for (std::size_t i = 0; i < sizeof(kCheckpointMagic); ++i) r.get<char>();
  if (const auto v = r.get<std::uint32_t>(); v != kCheckpointVersion)
    throw CheckpointError(fmt::format("unsupported checkpoint version {}", v));
  if (r.get<std::uint64_t>() != state_hash(config))
    throw CheckpointError("checkpoint was written for a different config");

  SimState s;
  s.world = make_world(config);
  s.step = r.get<std::uint64_t>();
  s.stats.births = r.get<std::uint64_t>();
  s.stats.deaths = r.get<std::uint64_t>();
  s.stats.total_harvested = r.get<double>();
  s.stats.total_harvest_energy = r.get<double>();
  s.stats.total_death_energy = r.get<double>();

  const auto cap = r.get<std::uint64_t>();
  const auto neurons = r.get<std::uint64_t>();
  const auto n_params = r.get<std::uint64_t>();
  s.agents = AgentSet(cap, neurons, n_params);
  s.agents.next_uid = r.get<Uid>();
  s.agents.overflow_count = r.get<std::uint64_t>();
  r.get_array(s.agents.active, cap);
  r.get_array(s.agents.uid, cap);
  r.get_array(s.agents.px, cap);
  r.get_array(s.agents.py, cap);
  r.get_array(s.agents.vx, cap);
  r.get_array(s.agents.vy, cap);
  r.get_array(s.agents.energy, cap);
  r.get_array(s.agents.rates, cap * neurons);
  r.get_array(s.agents.params, cap * n_params);

  const auto res_cap = r.get<std::uint64_t>();
  s.resources = ResourceSet(res_cap);
  r.get_array(s.resources.active, res_cap);
  r.get_array(s.resources.px, res_cap);
  r.get_array(s.resources.py, res_cap);
  r.get_array(s.resources.value, res_cap);
  if (!r.done()) throw CheckpointError("trailing bytes after checkpoint");
  return s;
}

void save_checkpoint(const std::filesystem::path& path, const SimState& state,
                     const SimConfig& config) {
  std::ofstream out(path, std::ios::binary);
  out << checkpoint_bytes(state, config);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
}

SimState load_checkpoint(const std::filesystem::path& path, const SimConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError(fmt::format("cannot open '{}'", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_checkpoint(buf.str(), config);
}

std::string es_history_text(const EsResult& result) {
  std::string out = kEsHeader;
  out += '\n';
  for (std::size_t g = 0; g < result.mean_fitness.size(); ++g)
    out += fmt::format("{},{},{}\n", g + 1, result.mean_fitness[g], result.best_history[g]);
  return out;
}

}  // namespace forage::io
