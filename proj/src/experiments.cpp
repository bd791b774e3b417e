#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "adventurer/harness.hpp"
#include "adventurer/rng.hpp"
#include "json.hpp"

namespace adv {

namespace {

constexpr std::size_t kRoomDim = 144;
constexpr double kFlipProb = 0.05;
constexpr std::size_t kKlBins = 20;
constexpr double kKlSmoothing = 1e-6;

std::vector<double> score_set(const NoveltyEstimator& est,
                              const std::vector<std::vector<double>>& set) {
  std::vector<double> out;
  out.reserve(set.size());
  for (const auto& s : set) out.push_back(est.score(s));
  return out;
}

// Min-max over the concatenation of all lists, normalizing each in place.
// Returns false when all values coincide (nothing to normalize).
bool minmax_normalize(const std::vector<std::vector<double>*>& lists) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto* l : lists)
    for (double v : *l) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  if (!(hi > lo)) return false;
  for (auto* l : lists)
    for (double& v : *l) v = (v - lo) / (hi - lo);
  return true;
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) /
         static_cast<double>(v.size());
}

// Shortest decimal string that parses back to exactly v.
std::string format_double(double v) {
  for (int prec = 1; prec <= 17; ++prec) {
    std::ostringstream o;
    o << std::setprecision(prec) << v;
    if (std::stod(o.str()) == v) return o.str();
  }
  std::ostringstream o;
  o << std::setprecision(17) << v;
  return o.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

Corpus make_two_room_corpus(std::size_t samples_per_part, std::uint64_t seed) {
  if (samples_per_part == 0)
    throw std::invalid_argument("corpus: need at least one sample per part");
  Corpus c;
  c.obs_dim = kRoomDim;
  for (std::size_t room = 1; room <= 2; ++room) {
    RandomStream tmpl_rng = derive_stream(seed, "room-template", room);
    std::vector<double> tmpl(kRoomDim);
    for (double& v : tmpl) v = tmpl_rng.uniform() < 0.5 ? 0.0 : 1.0;
    RandomStream sample_rng = derive_stream(seed, "room-samples", room);
    auto gen = [&]() {
      std::vector<double> s = tmpl;
      for (double& v : s)
        if (sample_rng.uniform() < kFlipProb) v = 1.0 - v;
      return s;
    };
    auto& part_a = room == 1 ? c.d1a : c.d2a;
    auto& part_b = room == 1 ? c.d1b : c.d2b;
    for (std::size_t i = 0; i < samples_per_part; ++i) part_a.push_back(gen());
    for (std::size_t i = 0; i < samples_per_part; ++i) part_b.push_back(gen());
  }
  return c;
}

double histogram_kl(const std::vector<double>& p, const std::vector<double>& q,
                    std::size_t bins, double lo, double hi, double smoothing) {
  if (bins == 0) throw std::invalid_argument("kl: need at least one bin");
  if (p.empty() || q.empty())
    throw std::invalid_argument("kl: empty score list");
  if (!(hi > lo)) throw std::invalid_argument("kl: bad bin range");
  auto histo = [&](const std::vector<double>& xs) {
    std::vector<double> counts(bins, 0.0);
    for (double x : xs) {
      double u = (x - lo) / (hi - lo);
      auto idx = static_cast<long long>(u * static_cast<double>(bins));
      idx = std::clamp<long long>(idx, 0, static_cast<long long>(bins) - 1);
      counts[static_cast<std::size_t>(idx)] += 1.0;
    }
    return counts;
  };
  std::vector<double> cp = histo(p), cq = histo(q);
  double tp = static_cast<double>(p.size()) +
              static_cast<double>(bins) * smoothing;
  double tq = static_cast<double>(q.size()) +
              static_cast<double>(bins) * smoothing;
  double kl = 0.0;
  for (std::size_t i = 0; i < bins; ++i) {
    double pi = (cp[i] + smoothing) / tp;
    double qi = (cq[i] + smoothing) / tq;
    kl += pi * std::log(pi / qi);
  }
  return kl;
}

namespace {

std::vector<double> midranks(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
    double mid = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = mid;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("spearman: need two equal-length series");
  std::vector<double> rx = midranks(x), ry = midranks(y);
  double mx = mean_of(rx), my = mean_of(ry);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    double dx = rx[i] - mx, dy = ry[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

namespace {

void check_corpus(const Corpus& corpus) {
  if (corpus.obs_dim == 0 || corpus.d1a.empty() || corpus.d1b.empty() ||
      corpus.d2a.empty() || corpus.d2b.empty())
    throw std::invalid_argument("corpus: empty partition");
  if (corpus.d1a.size() != corpus.d2a.size())
    throw std::invalid_argument("corpus: training partitions must match in size");
}

StateBuffer buffer_of(const std::vector<const std::vector<std::vector<double>>*>& parts,
                      std::size_t obs_dim) {
  std::size_t total = 0;
  for (const auto* p : parts) total += p->size();
  StateBuffer buf(total, obs_dim);
  for (const auto* p : parts)
    for (const auto& s : *p) buf.push(s);
  return buf;
}

}  // namespace

SettingsResult eval_novelty_settings(const Corpus& corpus,
                                     const NoveltyOptions& opt,
                                     std::size_t fit_steps,
                                     std::uint64_t seed) {
  check_corpus(corpus);
  SettingsResult r;
  {
    auto est =
        make_estimator(corpus.obs_dim, opt, derive_seed(seed, "setting1"));
    StateBuffer buf = buffer_of({&corpus.d1a}, corpus.obs_dim);
    est->fit(buf, fit_steps);
    std::vector<double> s1a = score_set(*est, corpus.d1a);
    std::vector<double> s1b = score_set(*est, corpus.d1b);
    std::vector<double> s2b = score_set(*est, corpus.d2b);
    if (minmax_normalize({&s1a, &s1b, &s2b})) {
      r.objective1 =
          histogram_kl(s1b, s1a, kKlBins, 0.0, 1.0, kKlSmoothing) -
          histogram_kl(s2b, s1a, kKlBins, 0.0, 1.0, kKlSmoothing);
    } else {
      r.degenerate1 = true;
    }
    r.scores1["d1a"] = std::move(s1a);
    r.scores1["d1b"] = std::move(s1b);
    r.scores1["d2b"] = std::move(s2b);
  }
  {
    auto est =
        make_estimator(corpus.obs_dim, opt, derive_seed(seed, "setting2"));
    StateBuffer buf = buffer_of({&corpus.d1a, &corpus.d2a}, corpus.obs_dim);
    est->fit(buf, fit_steps);
    std::vector<double> s1a = score_set(*est, corpus.d1a);
    std::vector<double> s1b = score_set(*est, corpus.d1b);
    std::vector<double> s2a = score_set(*est, corpus.d2a);
    std::vector<double> s2b = score_set(*est, corpus.d2b);
    if (minmax_normalize({&s1a, &s1b, &s2a, &s2b})) {
      r.objective2 =
          histogram_kl(s1b, s1a, kKlBins, 0.0, 1.0, kKlSmoothing) +
          histogram_kl(s2b, s2a, kKlBins, 0.0, 1.0, kKlSmoothing);
    } else {
      r.degenerate2 = true;
    }
    r.scores2["d1a"] = std::move(s1a);
    r.scores2["d1b"] = std::move(s1b);
    r.scores2["d2a"] = std::move(s2a);
    r.scores2["d2b"] = std::move(s2b);
  }
  return r;
}

std::vector<AlphaCell> alpha_sweep(const Corpus& corpus,
                                   const NoveltyOptions& base,
                                   const std::vector<double>& alphas,
                                   std::size_t fit_steps, std::uint64_t seed) {
  check_corpus(corpus);
  if (alphas.empty()) throw std::invalid_argument("alpha sweep: empty grid");

  using Components = std::vector<std::pair<double, double>>;
  auto components_of = [](const Bigan& b,
                          const std::vector<std::vector<double>>& set) {
    Components out;
    out.reserve(set.size());
    for (const auto& s : set) out.push_back(b.score_components(s));
    return out;
  };
  auto compose = [](const Components& comps, double alpha) {
    std::vector<double> out;
    out.reserve(comps.size());
    for (const auto& [lg, ld] : comps)
      out.push_back(alpha * lg + (1.0 - alpha) * ld);
    return out;
  };

  Bigan b1(corpus.obs_dim, base, derive_seed(seed, "setting1"));
  {
    StateBuffer buf = buffer_of({&corpus.d1a}, corpus.obs_dim);
    b1.fit(buf, fit_steps);
  }
  Components c1_d1a = components_of(b1, corpus.d1a);
  Components c1_d1b = components_of(b1, corpus.d1b);
  Components c1_d2b = components_of(b1, corpus.d2b);

  Bigan b2(corpus.obs_dim, base, derive_seed(seed, "setting2"));
  {
    StateBuffer buf = buffer_of({&corpus.d1a, &corpus.d2a}, corpus.obs_dim);
    b2.fit(buf, fit_steps);
  }
  Components c2_d1a = components_of(b2, corpus.d1a);
  Components c2_d1b = components_of(b2, corpus.d1b);
  Components c2_d2a = components_of(b2, corpus.d2a);
  Components c2_d2b = components_of(b2, corpus.d2b);

  std::vector<AlphaCell> cells;
  cells.reserve(alphas.size());
  for (double alpha : alphas) {
    AlphaCell cell;
    cell.alpha = alpha;
    {
      std::vector<double> s1a = compose(c1_d1a, alpha);
      std::vector<double> s1b = compose(c1_d1b, alpha);
      std::vector<double> s2b = compose(c1_d2b, alpha);
      if (minmax_normalize({&s1a, &s1b, &s2b}))
        cell.objective1 =
            histogram_kl(s1b, s1a, kKlBins, 0.0, 1.0, kKlSmoothing) -
            histogram_kl(s2b, s1a, kKlBins, 0.0, 1.0, kKlSmoothing);
    }
    {
      std::vector<double> s1a = compose(c2_d1a, alpha);
      std::vector<double> s1b = compose(c2_d1b, alpha);
      std::vector<double> s2a = compose(c2_d2a, alpha);
      std::vector<double> s2b = compose(c2_d2b, alpha);
      if (minmax_normalize({&s1a, &s1b, &s2a, &s2b}))
        cell.objective2 =
            histogram_kl(s1b, s1a, kKlBins, 0.0, 1.0, kKlSmoothing) +
            histogram_kl(s2b, s2a, kKlBins, 0.0, 1.0, kKlSmoothing);
    }
    cells.push_back(cell);
  }
  return cells;
}

CountVsScoreResult count_vs_score(
    const std::vector<std::vector<double>>& class0,
    const std::vector<std::vector<double>>& class1_train,
    const std::vector<std::vector<double>>& class1_eval,
    const std::vector<double>& fractions, const NoveltyOptions& opt,
    std::size_t fit_steps, std::uint64_t seed) {
  if (fractions.empty() || fractions.front() != 0.0 ||
      fractions.back() != 1.0)
    throw std::invalid_argument(
        "count_vs_score: fractions must start at 0 and end at 1");
  for (std::size_t i = 1; i < fractions.size(); ++i)
    if (!(fractions[i] > fractions[i - 1]))
      throw std::invalid_argument(
          "count_vs_score: fractions must be strictly ascending");
  if (class0.empty() || class1_train.empty() || class1_eval.empty())
    throw std::invalid_argument("count_vs_score: empty class set");

  const std::size_t dim = class0.front().size();
  CountVsScoreResult r;
  r.fractions = fractions;
  for (std::size_t fi = 0; fi < fractions.size(); ++fi) {
    const double p = fractions[fi];
    const auto n_add = static_cast<std::size_t>(
        p * static_cast<double>(class1_train.size()));
    StateBuffer buf(class0.size() + n_add, dim);
    for (const auto& s : class0) buf.push(s);
    for (std::size_t i = 0; i < n_add; ++i) buf.push(class1_train[i]);
    auto est = make_estimator(dim, opt, derive_seed(seed, "count"));
    est->fit(buf, fit_steps);
    r.mean_scores.push_back(mean_of(score_set(*est, class1_eval)));
    if (fi == 0) r.self_score = mean_of(score_set(*est, class0));
  }
  return r;
}

GridResult grid_search(const std::string& param,
                       const std::vector<double>& values, const Config& cfg) {
  if (values.empty()) throw std::invalid_argument("grid: empty value list");
  cfg.validate();
  const auto seeds = static_cast<std::size_t>(cfg.get_int("eval.seeds"));
  const auto samples = static_cast<std::size_t>(cfg.get_int("eval.samples"));
  const auto fit_steps = static_cast<std::size_t>(cfg.get_int("eval.steps"));
  const std::uint64_t root = cfg.get_uint("train.seed");
  const char* crlf = "\r\n";

  GridResult g;
  g.param = param;
  g.values = values;
  std::ostringstream csv;

  if (param == "alpha") {
    csv << "param,value,replicate,setting1_objective,setting2_objective"
        << crlf;
    NoveltyOptions base = cfg.novelty();
    base.method = "bigan";
    std::vector<double> sum1(values.size(), 0.0), sum2(values.size(), 0.0);
    for (std::size_t s = 0; s < seeds; ++s) {
      std::uint64_t rep = derive_seed(root, "replicate", s);
      Corpus corpus = make_two_room_corpus(samples, derive_seed(rep, "corpus"));
      std::vector<AlphaCell> cells =
          alpha_sweep(corpus, base, values, fit_steps, rep);
      for (std::size_t i = 0; i < cells.size(); ++i) {
        g.rows.push_back({values[i], s, cells[i].objective1,
                          cells[i].objective2});
        csv << "alpha," << format_double(values[i]) << "," << s << ","
            << format_double(cells[i].objective1) << ","
            << format_double(cells[i].objective2) << crlf;
        sum1[i] += cells[i].objective1;
        sum2[i] += cells[i].objective2;
      }
    }
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      double m1 = sum1[i] / static_cast<double>(seeds);
      double m2 = sum2[i] / static_cast<double>(seeds);
      csv << "alpha," << format_double(values[i]) << ",mean,"
          << format_double(m1) << "," << format_double(m2) << crlf;
      if (sum1[i] + sum2[i] < sum1[best_i] + sum2[best_i]) best_i = i;
    }
    g.best = values[best_i];
  } else if (param == "beta") {
    csv << "param,value,replicate,mean_return" << crlf;
    const auto epochs = static_cast<std::size_t>(cfg.get_int("train.epochs"));
    const std::size_t tail = std::max<std::size_t>(epochs / 4, 1);
    std::vector<double> sums(values.size(), 0.0);
    for (std::size_t i = 0; i < values.size(); ++i) {
      for (std::size_t s = 0; s < seeds; ++s) {
        Config c2 = cfg;
        c2.set("ppo.beta", format_double(values[i]));
        c2.set("train.seed",
               std::to_string(derive_seed(root, "replicate", s)));
        TrainResult tr = train(c2, "");
        double acc = 0.0;
        for (std::size_t k = tr.history.size() - tail;
             k < tr.history.size(); ++k)
          acc += tr.history[k].mean_return;
        double metric = acc / static_cast<double>(tail);
        g.rows.push_back({values[i], s, metric, 0.0});
        csv << "beta," << format_double(values[i]) << "," << s << ","
            << format_double(metric) << crlf;
        sums[i] += metric;
      }
    }
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      csv << "beta," << format_double(values[i]) << ",mean,"
          << format_double(sums[i] / static_cast<double>(seeds)) << crlf;
      if (sums[i] > sums[best_i]) best_i = i;
    }
    g.best = values[best_i];
  } else {
    throw std::invalid_argument("grid: param must be alpha or beta");
  }
  g.csv = csv.str();
  return g;
}

namespace {

struct SeriesPoint {
  double x = 0.0;
  double mean = 0.0;
  double std_dev = 0.0;
};

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&')
      out += "&amp;";
    else if (c == '<')
      out += "&lt;";
    else if (c == '>')
      out += "&gt;";
    else
      out += c;
  }
  return out;
}

std::string axis_label(double v) {
  std::ostringstream o;
  o << std::setprecision(4) << v;
  return o.str();
}

void write_svg(const std::filesystem::path& path, const std::string& title,
               const std::vector<SeriesPoint>& series) {
  constexpr double kW = 640, kH = 400;
  constexpr double kL = 60, kR = 20, kT = 30, kB = 40;
  double xmin = series.front().x, xmax = series.back().x;
  if (xmin == xmax) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  double ymin = std::numeric_limits<double>::infinity();
  double ymax = -ymin;
  for (const auto& p : series) {
    ymin = std::min(ymin, p.mean - p.std_dev);
    ymax = std::max(ymax, p.mean + p.std_dev);
  }
  if (ymin == ymax) {
    ymin -= 1.0;
    ymax += 1.0;
  } else {
    double pad = (ymax - ymin) * 0.05;
    ymin -= pad;
    ymax += pad;
  }
  auto px = [&](double x) {
    return kL + (x - xmin) / (xmax - xmin) * (kW - kL - kR);
  };
  auto py = [&](double y) {
    return kH - kB - (y - ymin) / (ymax - ymin) * (kH - kT - kB);
  };
  auto pt = [&](double x, double y) {
    std::ostringstream o;
    o << std::setprecision(8) << px(x) << "," << py(y);
    return o.str();
  };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("plot: cannot write " + path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
         "width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
  out << "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  out << "<polygon fill=\"#9db7e8\" fill-opacity=\"0.45\" stroke=\"none\" "
         "points=\"";
  for (const auto& p : series) out << pt(p.x, p.mean + p.std_dev) << " ";
  for (auto it = series.rbegin(); it != series.rend(); ++it)
    out << pt(it->x, it->mean - it->std_dev) << " ";
  out << "\"/>\n";
  out << "<polyline fill=\"none\" stroke=\"#2a4db0\" stroke-width=\"1.5\" "
         "points=\"";
  for (const auto& p : series) out << pt(p.x, p.mean) << " ";
  out << "\"/>\n";
  out << "<line x1=\"" << kL << "\" y1=\"" << kH - kB << "\" x2=\"" << kW - kR
      << "\" y2=\"" << kH - kB << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kL << "\" y1=\"" << kT << "\" x2=\"" << kL
      << "\" y2=\"" << kH - kB << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << kL << "\" y=\"" << kH - kB + 16
      << "\" font-family=\"sans-serif\" font-size=\"12\">"
      << axis_label(xmin) << "</text>\n";
  out << "<text x=\"" << kW - kR - 40 << "\" y=\"" << kH - kB + 16
      << "\" font-family=\"sans-serif\" font-size=\"12\">"
      << axis_label(xmax) << "</text>\n";
  out << "<text x=\"4\" y=\"" << kH - kB
      << "\" font-family=\"sans-serif\" font-size=\"12\">" << axis_label(ymin)
      << "</text>\n";
  out << "<text x=\"4\" y=\"" << kT + 6
      << "\" font-family=\"sans-serif\" font-size=\"12\">" << axis_label(ymax)
      << "</text>\n";
  out << "<text x=\"" << kW / 2 << "\" y=\"18\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"14\">"
      << xml_escape(title) << "</text>\n";
  out << "</svg>\n";
}

std::string safe_name(const std::string& s) {
  std::string out;
  for (char c : s)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
            c == '-')
               ? c
               : '_';
  return out;
}

}  // namespace

PlotResult emit_plots(const std::string& in_dir, const std::string& out_dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(in_dir))
    throw std::runtime_error("plot: input is not a directory: " + in_dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(in_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl")
      files.push_back(entry.path());
    else if (entry.is_directory())
      for (const auto& sub : fs::directory_iterator(entry.path()))
        if (sub.is_regular_file() && sub.path().extension() == ".jsonl")
          files.push_back(sub.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty())
    throw std::runtime_error("plot: no .jsonl files under " + in_dir);

  std::size_t warnings = 0;
  std::map<long long, std::map<std::string, std::vector<double>>> agg;
  std::set<std::string> metrics;
  for (const auto& file : files) {
    std::ifstream in(file);
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.is_object() || !j.contains("epoch") ||
          !j["epoch"].is_number()) {
        ++warnings;
        continue;
      }
      auto epoch = static_cast<long long>(j["epoch"].get<double>());
      for (const auto& [key, value] : j.items()) {
        if (key == "epoch" || !value.is_number()) continue;
        agg[epoch][key].push_back(value.get<double>());
        metrics.insert(key);
      }
    }
  }
  if (agg.empty() || metrics.empty())
    throw std::runtime_error("plot: no valid metrics records under " + in_dir);

  fs::create_directories(out_dir);
  const char* crlf = "\r\n";
  std::ofstream csv(fs::path(out_dir) / "aggregate.csv");
  if (!csv) throw std::runtime_error("plot: cannot write aggregate.csv");
  csv << "epoch";
  for (const auto& m : metrics)
    csv << "," << csv_field(m + "_mean") << "," << csv_field(m + "_std");
  csv << crlf;

  std::map<std::string, std::vector<SeriesPoint>> series;
  for (const auto& [epoch, row] : agg) {
    csv << epoch;
    for (const auto& m : metrics) {
      auto it = row.find(m);
      if (it == row.end() || it->second.empty()) {
        csv << ",,";
        continue;
      }
      const auto& vals = it->second;
      double mean = mean_of(vals);
      double var = 0.0;
      for (double v : vals) var += (v - mean) * (v - mean);
      var /= static_cast<double>(vals.size());
      double sd = std::sqrt(var);
      csv << "," << format_double(mean) << "," << format_double(sd);
      series[m].push_back({static_cast<double>(epoch), mean, sd});
    }
    csv << crlf;
  }

  std::size_t charts = 0;
  for (const auto& [m, pts] : series) {
    if (pts.empty()) continue;
    write_svg(fs::path(out_dir) / (safe_name(m) + ".svg"), m, pts);
    ++charts;
  }
  return {charts, warnings};
}

}  // namespace adv
