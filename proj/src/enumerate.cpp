#include "kserver/enumerate.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <thread>
#include <tuple>
#include <unordered_set>

#include "kserver/error.hpp"
#include "kserver/potential.hpp"
#include "kserver/taxi.hpp"

namespace kserver {

namespace {

constexpr Value kInf = std::numeric_limits<Value>::max() / 4;

void require_equally_spaced(const MetricSpace& space) {
  if (!space.is_circle()) fail(ErrorKind::unsupported, "symmetry reduction needs a circle");
  const auto pos = space.positions();
  const Value n = space.size();
  for (PointId p = 0; p < space.size(); ++p)
    if (pos[static_cast<std::size_t>(p)] * n != p * space.circumference())
      fail(ErrorKind::unsupported, "symmetry reduction needs equally spaced points");
}

std::vector<std::size_t> config_permutation(const ConfigSpace& cs, std::span<const PointId> perm) {
  std::vector<std::size_t> out(cs.size());
  std::array<PointId, kMaxServers> pts{};
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const Configuration& c = cs.at(i);
    for (int j = 0; j < c.size(); ++j) pts[static_cast<std::size_t>(j)] = perm[static_cast<std::size_t>(c[j])];
    std::sort(pts.begin(), pts.begin() + c.size());
    out[i] = cs.rank_sorted(pts.data());
  }
  return out;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) out[static_cast<std::size_t>(i)] = digits[v & 15];
  return out;
}

std::string digest(const std::string& key) {
  std::uint64_t a = 0xcbf29ce484222325ull, b = 0x84222325cbf29ce4ull;
  for (unsigned char c : key) {
    a = (a ^ c) * 0x100000001b3ull;
    b = (b ^ (c + 0x5bu)) * 0x100000001b3ull;
  }
  return hex64(a) + hex64(b);
}

// Work functions on the destination grid. Every support configuration lies
// on the grid (taxi destinations and cone apexes do), so the grid table
// determines the work function on the whole circle: a point between grid
// neighbours g- and g+ is reached through one of them.
struct GridModel {
  int n;
  int step;
  int g;
  SpacePtr full;
  SpacePtr grid;
  ConfigSpacePtr configs;
  std::vector<std::vector<std::size_t>> symmetries;
  std::vector<PointId> all_grid;

  GridModel(int num_points, int k, int dest_step) : n(num_points), step(dest_step), g(num_points / dest_step) {
    require(num_points >= 2 && dest_step >= 1 && num_points % dest_step == 0,
            "destination step must divide the number of points");
    full = build_circle(n, n, 2);
    std::vector<Value> pos;
    for (int i = 0; i < g; ++i) pos.push_back(static_cast<Value>(i) * step);
    grid = build_circle_subset(pos, n, 2);
    configs = ConfigSpace::create(grid, k);
    for (const auto& perm : circle_symmetries(g, 1)) symmetries.push_back(config_permutation(*configs, perm));
    for (PointId p = 0; p < g; ++p) all_grid.push_back(p);
  }

  Value circular(Value a, Value b) const {
    const Value d = ((a - b) % n + n) % n;
    return std::min(d, n - d);
  }

  // (w ^ (s, t)) on grid configurations; s is a full-circle point, t a grid point.
  std::vector<Value> taxi(std::span<const Value> w, int s, PointId t) const {
    const ConfigSpace& cs = *configs;
    const PointId lo = s / step;
    const PointId hi = (lo + 1) % g;
    const Value a = s - static_cast<Value>(lo) * step, b = step - a;
    const Value dst = circular(s, static_cast<Value>(t) * step);
    std::vector<Value> out(w.size());
    for (std::size_t idx = 0; idx < w.size(); ++idx) {
      const Configuration& c = cs.at(idx);
      Value best = kInf;
      for (int pos = 0; pos < cs.k(); ++pos) {
        Value via = w[cs.replace(idx, pos, lo)] + a;
        if (a != 0) via = std::min(via, w[cs.replace(idx, pos, hi)] + b);
        best = std::min(best, via + grid->distance(c[pos], t));
      }
      out[idx] = dst + best;
    }
    return out;
  }

  std::string key(std::span<const Value> w) const {
    const Value base = *std::min_element(w.begin(), w.end());
    std::string best;
    std::string cur(w.size(), '\0');
    for (const auto& sym : symmetries) {
      for (std::size_t i = 0; i < w.size(); ++i) {
        const Value v = w[i] - base;
        if (v > 255) fail(ErrorKind::invariant, "work-function spread exceeds the key range");
        cur[sym[i]] = static_cast<char>(static_cast<unsigned char>(v));
      }
      if (best.empty() || cur < best) best = cur;
    }
    return best;
  }

  std::vector<Value> decode(const std::string& key) const {
    std::vector<Value> out(key.size());
    for (std::size_t i = 0; i < key.size(); ++i) out[i] = static_cast<unsigned char>(key[i]);
    return out;
  }

  std::vector<Value> restrict_full(const WorkFunction& w) const {
    const ConfigSpace& cs = *configs;
    if (w.metric().size() == g && w.k() == cs.k()) return {w.values().begin(), w.values().end()};
    require_equally_spaced(w.metric());
    require(w.metric().size() == n && w.k() == cs.k(), "work function does not live on the enumeration circle");
    std::vector<Value> out(cs.size());
    std::array<PointId, kMaxServers> pts{};
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const Configuration& c = cs.at(i);
      for (int j = 0; j < c.size(); ++j) pts[static_cast<std::size_t>(j)] = c[j] * step;
      out[i] = w.at(w.configs().rank_sorted(pts.data()));
    }
    return out;
  }
};

struct Letter {
  int start;
  PointId dest;
};

struct Expansion {
  std::vector<std::string> fresh;
  std::vector<Violation> violations;
};

class Enumerator {
 public:
  explicit Enumerator(const EnumerationOptions& o) : o_(o), model_(o.num_points, o.k, o.dest_step) {
    for (int s = 0; s < model_.n; ++s)
      for (PointId t = 0; t < model_.g; ++t)
        if (o.taxi_alphabet || s == t * model_.step) letters_.push_back({s, t});
    if (o.midpoint_violation_requests) full_configs_ = ConfigSpace::create(model_.full, o.k);
  }

  EnumerationResult run() {
    bool resumed = false;
    if (o_.checkpoint && o_.resume) resumed = load(*o_.checkpoint);
    if (!resumed) seed();
    EnumerationResult result;
    std::size_t since_checkpoint = 0;
    const std::size_t chunk = 2048;
    while (head_ < queue_.size()) {
      if (o_.max_states && visited_.size() >= o_.max_states) break;
      const std::size_t end = std::min(queue_.size(), head_ + chunk);
      std::vector<Expansion> parts(static_cast<std::size_t>(std::max(o_.workers, 1)));
      auto work = [&](std::size_t part) {
        std::unordered_set<std::string> local;
        for (std::size_t i = head_ + part; i < end; i += parts.size()) expand(queue_[i], local, parts[part]);
      };
      if (parts.size() == 1) {
        work(0);
      } else {
        std::vector<std::thread> threads;
        for (std::size_t p = 0; p < parts.size(); ++p) threads.emplace_back(work, p);
        for (auto& th : threads) th.join();
      }
      // A chunk is committed whole, so a budget stop leaves the checkpoint
      // resumable: the chunk is expanded again on resume.
      const std::size_t queue_mark = queue_.size();
      bool full = false;
      for (auto& part : parts) {
        for (auto& key : part.fresh) {
          if (visited_.insert(key).second) queue_.push_back(std::move(key));
          if (o_.max_states && visited_.size() > o_.max_states) {
            full = true;
            break;
          }
        }
        if (full) break;
      }
      if (full) {
        for (std::size_t i = queue_mark; i < queue_.size(); ++i) visited_.erase(queue_[i]);
        queue_.resize(queue_mark);
        truncated_ = true;
        break;
      }
      for (auto& part : parts)
        for (auto& v : part.violations) violations_.push_back(std::move(v));
      since_checkpoint += end - head_;
      expanded_ += end - head_;
      head_ = end;
      if (o_.progress) o_.progress(visited_.size(), queue_.size() - head_);
      if (o_.checkpoint && since_checkpoint >= o_.checkpoint_every) {
        save(*o_.checkpoint);
        since_checkpoint = 0;
      }
    }
    result.states = visited_.size();
    result.expanded = expanded_;
    result.complete = !truncated_ && head_ == queue_.size();
    std::sort(violations_.begin(), violations_.end(), [](const Violation& a, const Violation& b) {
      return std::tie(a.fingerprint, a.request) < std::tie(b.fingerprint, b.request);
    });
    result.violations = violations_;
    std::set<std::string> classes;
    for (const auto& v : violations_) classes.insert(v.fingerprint);
    result.violation_classes = classes.size();
    if (o_.checkpoint) {
      save(*o_.checkpoint);
      result.checkpoint = o_.checkpoint;
    }
    return result;
  }

 private:
  void add(const std::vector<Value>& table) {
    std::string k = model_.key(table);
    if (visited_.insert(k).second) queue_.push_back(std::move(k));
  }

  void seed() {
    const int k = o_.k;
    if (o_.seed_cones && model_.g >= k) {
      std::vector<bool> pick(static_cast<std::size_t>(model_.g), false);
      std::fill(pick.begin(), pick.begin() + k, true);
      do {
        std::vector<PointId> pts;
        for (PointId p = 0; p < model_.g; ++p)
          if (pick[static_cast<std::size_t>(p)]) pts.push_back(p);
        const WorkFunction cone = WorkFunction::cone(model_.configs, Configuration(std::span<const PointId>(pts)));
        add({cone.values().begin(), cone.values().end()});
      } while (std::prev_permutation(pick.begin(), pick.end()));
    }
    for (const WorkFunction& w : o_.extra_seeds) add(model_.restrict_full(w));
  }

  void expand(const std::string& key, std::unordered_set<std::string>& local, Expansion& out) const {
    const std::vector<Value> table = model_.decode(key);
    for (const Letter& l : letters_) {
      std::string child = model_.key(model_.taxi(table, l.start, l.dest));
      if (visited_.count(child) || !local.insert(child).second) continue;
      out.fresh.push_back(std::move(child));
    }
    check_violations(key, table, out);
  }

  void check_violations(const std::string& key, const std::vector<Value>& table, Expansion& out) const {
    const WorkFunction w(model_.configs, table);
    const Value phi = server_potential_value(w, model_.all_grid);
    for (PointId r = 0; r < model_.g; ++r) {
      const WorkFunction next = update(w, r);
      const Value ext = extended_cost(w, next);
      const Value dphi = server_potential_value(next, model_.all_grid) - phi;
      if (dphi < ext) out.violations.push_back({digest(key), r * model_.step, ext, dphi});
    }
    if (!full_configs_) return;
    std::vector<PointId> from_coarse;
    for (PointId p = 0; p < model_.g; ++p) from_coarse.push_back(p * model_.step);
    const WorkFunction lifted = lift(w, full_configs_, from_coarse, 1);
    std::vector<PointId> all;
    for (PointId p = 0; p < model_.n; ++p) all.push_back(p);
    const Value phi_full = server_potential_value(lifted, all);
    for (PointId r = 0; r < model_.n; ++r) {
      if (r % model_.step == 0) continue;
      const WorkFunction next = update(lifted, r);
      const Value ext = extended_cost(lifted, next);
      const Value dphi = server_potential_value(next, all) - phi_full;
      if (dphi < ext) out.violations.push_back({digest(key), r, ext, dphi});
    }
  }

  static constexpr const char* kMagic = "kserver-enumeration-v1";

  template <class T>
  static void put(std::ofstream& f, T v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof v);
  }
  template <class T>
  static T get(std::ifstream& f) {
    T v{};
    f.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!f) fail(ErrorKind::parse, "truncated checkpoint");
    return v;
  }
  static void put_string(std::ofstream& f, const std::string& s) {
    put<std::uint64_t>(f, s.size());
    f.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  static std::string get_string(std::ifstream& f) {
    const auto size = get<std::uint64_t>(f);
    if (size > (1u << 20)) fail(ErrorKind::parse, "corrupt checkpoint");
    std::string s(size, '\0');
    f.read(s.data(), static_cast<std::streamsize>(size));
    if (!f) fail(ErrorKind::parse, "truncated checkpoint");
    return s;
  }

  std::array<std::int32_t, 5> header() const {
    return {o_.num_points, o_.k, o_.dest_step, o_.taxi_alphabet ? 1 : 0, o_.midpoint_violation_requests ? 1 : 0};
  }

  // Every visited key sits in queue_ in discovery order; the first head_
  // of them have been expanded.
  void save(const std::filesystem::path& path) const {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
      std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
      if (!f) fail(ErrorKind::invalid_input, "cannot write checkpoint " + tmp.string());
      put_string(f, kMagic);
      for (auto v : header()) put(f, v);
      put<std::uint64_t>(f, head_);
      put<std::uint64_t>(f, queue_.size());
      for (const auto& key : queue_) put_string(f, key);
      put<std::uint64_t>(f, violations_.size());
      for (const auto& v : violations_) {
        put_string(f, v.fingerprint);
        put(f, v.request);
        put(f, v.extended_cost);
        put(f, v.potential_change);
      }
      if (!f) fail(ErrorKind::invalid_input, "failed writing checkpoint " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
  }

  bool load(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return false;
    if (get_string(f) != kMagic) fail(ErrorKind::parse, "not an enumeration checkpoint: " + path.string());
    for (auto v : header())
      if (get<std::int32_t>(f) != v) fail(ErrorKind::invalid_input, "checkpoint was written with different options");
    head_ = get<std::uint64_t>(f);
    const auto count = get<std::uint64_t>(f);
    if (head_ > count) fail(ErrorKind::parse, "corrupt checkpoint");
    queue_.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
      queue_.push_back(get_string(f));
      visited_.insert(queue_.back());
    }
    expanded_ = head_;
    const auto nv = get<std::uint64_t>(f);
    for (std::uint64_t i = 0; i < nv; ++i) {
      Violation v;
      v.fingerprint = get_string(f);
      v.request = get<PointId>(f);
      v.extended_cost = get<Value>(f);
      v.potential_change = get<Value>(f);
      violations_.push_back(std::move(v));
    }
    return true;
  }

  const EnumerationOptions& o_;
  GridModel model_;
  std::vector<Letter> letters_;
  ConfigSpacePtr full_configs_;
  std::unordered_set<std::string> visited_;
  std::vector<std::string> queue_;
  std::size_t head_ = 0;
  std::size_t expanded_ = 0;
  bool truncated_ = false;
  std::vector<Violation> violations_;
};

}  // namespace

std::vector<std::vector<PointId>> circle_symmetries(int num_points, int rotation_step) {
  require(num_points >= 1 && rotation_step >= 1 && num_points % rotation_step == 0,
          "rotation step must divide the number of points");
  std::vector<std::vector<PointId>> out;
  for (int j = 0; j < num_points; j += rotation_step)
    for (int sign : {1, -1}) {
      std::vector<PointId> perm(static_cast<std::size_t>(num_points));
      for (int p = 0; p < num_points; ++p)
        perm[static_cast<std::size_t>(p)] = static_cast<PointId>(((sign * p + j) % num_points + num_points) % num_points);
      out.push_back(std::move(perm));
    }
  return out;
}

WorkFunction transform(const WorkFunction& w, std::span<const PointId> perm) {
  const ConfigSpace& cs = w.configs();
  require(static_cast<int>(perm.size()) == cs.num_points(), "permutation size mismatch");
  const auto map = config_permutation(cs, perm);
  std::vector<Value> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[map[i]] = w.at(i);
  std::optional<PointId> last;
  if (w.last_request()) last = perm[static_cast<std::size_t>(*w.last_request())];
  return WorkFunction(w.configs_ptr(), std::move(out), last, w.origin());
}

CanonicalWF canonicalize(const WorkFunction& w, int rotation_step) {
  require_equally_spaced(w.metric());
  const Value base = w.min_value();
  CanonicalWF best;
  for (const auto& perm : circle_symmetries(w.metric().size(), rotation_step)) {
    const WorkFunction img = transform(w, perm);
    std::vector<Value> table(img.values().begin(), img.values().end());
    for (Value& v : table) v -= base;
    if (best.table.empty() || table < best.table) best.table = std::move(table);
  }
  return best;
}

EnumerationResult enumerate_reachable(const EnumerationOptions& options) {
  require(options.k >= 1 && options.k <= kMaxServers, "k out of range");
  return Enumerator(options).run();
}

std::string fingerprint(const WorkFunction& w, int dest_step) {
  require(w.metric().is_circle(), "fingerprints are defined on circles");
  const GridModel model(w.metric().size(), w.k(), dest_step);
  return digest(model.key(model.restrict_full(w)));
}

}  // namespace kserver
