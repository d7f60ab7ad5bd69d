#include "copra/psi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "copra/arithmetic.hpp"
#include "copra/errors.hpp"
#include "copra/io.hpp"
#include "copra/rng.hpp"
#include "copra/summation.hpp"

namespace copra {

namespace {

// Inclusion probability of n under a sampled-density profile; 0 where the
// profile is not positive.
double profile_probability(SupportPredicate::Profile profile, std::uint64_t n) {
    double logn = std::log(static_cast<double>(n));
    switch (profile) {
        case SupportPredicate::Profile::LoglogOverLogSq: {
            if (n < 3) return 0.0;
            return std::min(1.0, std::log(logn) / (logn * logn));
        }
        case SupportPredicate::Profile::OneOverLogSq: {
            if (n < 2) return 0.0;
            return std::min(1.0, 1.0 / (logn * logn));
        }
    }
    return 0.0;
}

std::vector<std::pair<std::string, std::string>> parse_kv_list(const std::string& text,
                                                               const std::string& what) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const std::string& item : split(text, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw UsageError(what + ": expected key=value, got '" + item + "'");
        out.emplace_back(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Support predicates
// ---------------------------------------------------------------------------

SupportPredicate predicate_all() {
    SupportPredicate p;
    p.kind = SupportPredicate::Kind::All;
    return p;
}

SupportPredicate predicate_primes() {
    SupportPredicate p;
    p.kind = SupportPredicate::Kind::Primes;
    return p;
}

SupportPredicate predicate_powers(std::uint64_t base) {
    if (base < 2) throw std::invalid_argument("predicate_powers: base must be >= 2");
    SupportPredicate p;
    p.kind = SupportPredicate::Kind::Powers;
    p.base = base;
    return p;
}

SupportPredicate predicate_progression(std::uint64_t residue, std::uint64_t modulus) {
    if (modulus == 0) throw std::invalid_argument("predicate_progression: modulus must be >= 1");
    if (residue >= modulus)
        throw std::invalid_argument("predicate_progression: residue must be < modulus");
    SupportPredicate p;
    p.kind = SupportPredicate::Kind::Progression;
    p.residue = residue;
    p.modulus = modulus;
    return p;
}

SupportPredicate predicate_list(std::vector<std::uint64_t> values) {
    for (std::uint64_t v : values)
        if (v == 0) throw std::invalid_argument("predicate_list: members must be >= 1");
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    SupportPredicate p;
    p.kind = SupportPredicate::Kind::List;
    p.list = std::move(values);
    return p;
}

SupportPredicate predicate_sampled(SupportPredicate::Profile profile, std::uint64_t seed) {
    SupportPredicate p;
    p.kind = SupportPredicate::Kind::Sampled;
    p.profile = profile;
    p.seed = seed;
    return p;
}

SupportPredicate predicate_custom(std::function<bool(std::uint64_t)> fn) {
    if (!fn) throw std::invalid_argument("predicate_custom: empty function");
    SupportPredicate p;
    p.kind = SupportPredicate::Kind::Custom;
    p.custom = std::move(fn);
    return p;
}

bool predicate_contains(const SupportPredicate& pred, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("predicate_contains: n must be >= 1");
    switch (pred.kind) {
        case SupportPredicate::Kind::All:
            return true;
        case SupportPredicate::Kind::Primes:
            return is_prime(n);
        case SupportPredicate::Kind::Powers: {
            if (n < pred.base) return false;
            std::uint64_t m = pred.base;
            while (m < n && m <= n / pred.base) m *= pred.base;
            return m == n;
        }
        case SupportPredicate::Kind::Progression:
            return n % pred.modulus == pred.residue;
        case SupportPredicate::Kind::List:
            return std::binary_search(pred.list.begin(), pred.list.end(), n);
        case SupportPredicate::Kind::Sampled: {
            double p = profile_probability(pred.profile, n);
            if (p <= 0.0) return false;
            SplitMix64 g(derive_seed(pred.seed, n));
            return g.uniform() < p;
        }
        case SupportPredicate::Kind::Custom:
            return pred.custom(n);
    }
    throw std::logic_error("predicate_contains: unreachable");
}

SupportPredicate parse_predicate(const std::string& text) {
    std::string body = trim(text);
    if (body == "all") return predicate_all();
    if (body == "primes") return predicate_primes();
    auto colon = body.find(':');
    std::string head = colon == std::string::npos ? body : body.substr(0, colon);
    std::string rest = colon == std::string::npos ? std::string() : body.substr(colon + 1);
    try {
        if (head == "powers") return predicate_powers(parse_uint(rest, "powers base"));
        if (head == "ap") {
            std::uint64_t a = 0, m = 0;
            bool got_a = false, got_m = false;
            for (auto& [k, v] : parse_kv_list(rest, "ap predicate")) {
                if (k == "a") {
                    a = parse_uint(v, "ap a");
                    got_a = true;
                } else if (k == "m") {
                    m = parse_uint(v, "ap m");
                    got_m = true;
                } else {
                    throw UsageError("ap predicate: unknown key '" + k + "'");
                }
            }
            if (!got_a || !got_m) throw UsageError("ap predicate: needs a= and m=");
            return predicate_progression(a, m);
        }
        if (head == "list") {
            std::vector<std::uint64_t> values;
            for (const std::string& item : split(rest, ',')) values.push_back(parse_uint(trim(item), "list member"));
            if (values.empty()) throw UsageError("list predicate: needs at least one member");
            return predicate_list(std::move(values));
        }
        if (head == "sampled") {
            SupportPredicate::Profile profile = SupportPredicate::Profile::LoglogOverLogSq;
            std::uint64_t seed = 0;
            bool got_profile = false;
            for (auto& [k, v] : parse_kv_list(rest, "sampled predicate")) {
                if (k == "profile") {
                    if (v == "upper") {
                        profile = SupportPredicate::Profile::LoglogOverLogSq;
                    } else if (v == "lower") {
                        profile = SupportPredicate::Profile::OneOverLogSq;
                    } else {
                        throw UsageError("sampled predicate: profile must be upper or lower");
                    }
                    got_profile = true;
                } else if (k == "seed") {
                    seed = parse_uint(v, "sampled seed");
                } else {
                    throw UsageError("sampled predicate: unknown key '" + k + "'");
                }
            }
            if (!got_profile) throw UsageError("sampled predicate: needs profile=");
            return predicate_sampled(profile, seed);
        }
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("predicate '") + body + "': " + e.what());
    }
    throw UsageError("unknown predicate '" + body + "'");
}

std::string predicate_to_text(const SupportPredicate& pred) {
    switch (pred.kind) {
        case SupportPredicate::Kind::All:
            return "all";
        case SupportPredicate::Kind::Primes:
            return "primes";
        case SupportPredicate::Kind::Powers:
            return "powers:" + std::to_string(pred.base);
        case SupportPredicate::Kind::Progression:
            return "ap:a=" + std::to_string(pred.residue) + ",m=" + std::to_string(pred.modulus);
        case SupportPredicate::Kind::List: {
            std::string out = "list:";
            for (std::size_t i = 0; i < pred.list.size(); ++i) {
                if (i) out += ',';
                out += std::to_string(pred.list[i]);
            }
            return out;
        }
        case SupportPredicate::Kind::Sampled:
            return std::string("sampled:profile=") +
                   (pred.profile == SupportPredicate::Profile::LoglogOverLogSq ? "upper" : "lower") +
                   ",seed=" + std::to_string(pred.seed);
        case SupportPredicate::Kind::Custom:
            throw UsageError("custom predicates have no text form");
    }
    throw std::logic_error("predicate_to_text: unreachable");
}

// ---------------------------------------------------------------------------
// PsiSpec construction
// ---------------------------------------------------------------------------

namespace {

void require_finite_in(double v, double lo, double hi, const char* what) {
    if (!std::isfinite(v) || v < lo || v > hi)
        throw std::invalid_argument(std::string(what) + ": value out of range");
}

}  // namespace

PsiSpec make_psi_constant(double c) {
    require_finite_in(c, 0.0, 0.5, "make_psi_constant");
    PsiSpec spec;
    spec.kind = PsiSpec::Kind::Constant;
    spec.c = c;
    return spec;
}

PsiSpec make_psi_power_law(double c, double s) {
    if (!std::isfinite(c) || c < 0.0) throw std::invalid_argument("make_psi_power_law: c must be >= 0");
    if (!std::isfinite(s) || s < 0.0) throw std::invalid_argument("make_psi_power_law: s must be >= 0");
    PsiSpec spec;
    spec.kind = PsiSpec::Kind::PowerLaw;
    spec.c = c;
    spec.s = s;
    return spec;
}

PsiSpec make_psi_power_log(double t) {
    if (!std::isfinite(t) || t < 0.0) throw std::invalid_argument("make_psi_power_log: t must be >= 0");
    PsiSpec spec;
    spec.kind = PsiSpec::Kind::PowerLog;
    spec.t = t;
    return spec;
}

PsiSpec make_psi_table(std::vector<std::pair<std::uint64_t, double>> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].first == 0) throw std::invalid_argument("make_psi_table: q must be >= 1");
        if (i && entries[i].first == entries[i - 1].first)
            throw std::invalid_argument("make_psi_table: duplicate q=" +
                                        std::to_string(entries[i].first));
        double v = entries[i].second;
        if (!std::isfinite(v) || v < 0.0 || v > 0.5)
            throw std::invalid_argument("make_psi_table: value outside [0, 1/2] at q=" +
                                        std::to_string(entries[i].first));
    }
    PsiSpec spec;
    spec.kind = PsiSpec::Kind::Table;
    spec.table = std::move(entries);
    return spec;
}

PsiSpec load_psi_table(const std::string& path) {
    std::string content = read_file(path);
    std::vector<std::string> lines = split(content, '\n');
    std::vector<std::pair<std::uint64_t, double>> entries;
    bool saw_header = false;
    for (const std::string& raw : lines) {
        std::string line = trim(raw);
        if (line.empty()) continue;
        if (!saw_header) {
            if (line != "q,value")
                throw UsageError("psi table " + path + ": first line must be header 'q,value'");
            saw_header = true;
            continue;
        }
        std::vector<std::string> fields = split(line, ',');
        if (fields.size() != 2)
            throw UsageError("psi table " + path + ": expected 2 fields, got line '" + line + "'");
        entries.emplace_back(parse_uint(trim(fields[0]), "table q"),
                             parse_double(trim(fields[1]), "table value"));
    }
    if (!saw_header) throw UsageError("psi table " + path + ": empty file");
    PsiSpec spec;
    try {
        spec = make_psi_table(std::move(entries));
    } catch (const std::invalid_argument& e) {
        throw UsageError("psi table " + path + ": " + e.what());
    }
    spec.table_path = path;
    return spec;
}

PsiSpec make_psi_restricted(SupportPredicate pred, PsiSpec base) {
    if (base.kind == PsiSpec::Kind::Restricted && !base.restricted_base)
        throw std::invalid_argument("make_psi_restricted: malformed base");
    PsiSpec spec;
    spec.kind = PsiSpec::Kind::Restricted;
    spec.support = std::move(pred);
    spec.restricted_base = std::make_shared<const PsiSpec>(std::move(base));
    return spec;
}

PsiSpec make_psi_eps_over_q(double eps) {
    require_finite_in(eps, 0.0, 0.5, "make_psi_eps_over_q");
    PsiSpec spec;
    spec.kind = PsiSpec::Kind::EpsilonOverQ;
    spec.eps = eps;
    return spec;
}

PsiSpec make_psi_custom(std::function<double(std::uint64_t)> fn) {
    if (!fn) throw std::invalid_argument("make_psi_custom: empty function");
    PsiSpec spec;
    spec.kind = PsiSpec::Kind::Custom;
    spec.custom = std::move(fn);
    return spec;
}

double eval_psi(const PsiSpec& spec, std::uint64_t q) {
    if (q == 0) throw std::invalid_argument("eval_psi: q must be >= 1");
    switch (spec.kind) {
        case PsiSpec::Kind::Constant:
            return spec.c;
        case PsiSpec::Kind::PowerLaw: {
            double v = spec.c / std::pow(static_cast<double>(q), spec.s);
            return v > 0.5 ? 0.0 : v;
        }
        case PsiSpec::Kind::PowerLog: {
            if (q == 1) return 0.0;  // log(1) = 0 leaves the formula undefined
            double logq = std::log(static_cast<double>(q));
            double v = 1.0 / (static_cast<double>(q) * std::pow(logq, spec.t));
            return v > 0.5 ? 0.0 : v;
        }
        case PsiSpec::Kind::Table: {
            auto it = std::lower_bound(spec.table.begin(), spec.table.end(), q,
                                       [](const auto& entry, std::uint64_t key) {
                                           return entry.first < key;
                                       });
            if (it != spec.table.end() && it->first == q) return it->second;
            return 0.0;
        }
        case PsiSpec::Kind::Restricted:
            return predicate_contains(spec.support, q) ? eval_psi(*spec.restricted_base, q) : 0.0;
        case PsiSpec::Kind::EpsilonOverQ:
            return spec.eps / static_cast<double>(q);
        case PsiSpec::Kind::Custom: {
            double v = spec.custom(q);
            if (!std::isfinite(v) || v < 0.0 || v > 0.5)
                throw PsiRangeError(q, "psi rule produced a value outside [0, 1/2] at q=" +
                                           std::to_string(q));
            return v;
        }
    }
    throw std::logic_error("eval_psi: unreachable");
}

PsiSpec parse_psi(const std::string& text) {
    std::string body = trim(text);
    auto colon = body.find(':');
    if (colon == std::string::npos)
        throw UsageError("psi expression '" + body + "': expected kind:params");
    std::string head = body.substr(0, colon);
    std::string rest = trim(body.substr(colon + 1));
    try {
        if (head == "const") return make_psi_constant(parse_double(rest, "const psi"));
        if (head == "eps_over_q") return make_psi_eps_over_q(parse_double(rest, "eps_over_q psi"));
        if (head == "table") return load_psi_table(rest);
        if (head == "pow") {
            double c = 0.0, s = 0.0;
            bool got_c = false, got_s = false;
            for (auto& [k, v] : parse_kv_list(rest, "pow psi")) {
                if (k == "c") {
                    c = parse_double(v, "pow c");
                    got_c = true;
                } else if (k == "s") {
                    s = parse_double(v, "pow s");
                    got_s = true;
                } else {
                    throw UsageError("pow psi: unknown key '" + k + "'");
                }
            }
            if (!got_c || !got_s) throw UsageError("pow psi: needs c= and s=");
            return make_psi_power_law(c, s);
        }
        if (head == "powlog") {
            double t = 0.0;
            bool got_t = false;
            for (auto& [k, v] : parse_kv_list(rest, "powlog psi")) {
                if (k == "t") {
                    t = parse_double(v, "powlog t");
                    got_t = true;
                } else {
                    throw UsageError("powlog psi: unknown key '" + k + "'");
                }
            }
            if (!got_t) throw UsageError("powlog psi: needs t=");
            return make_psi_power_log(t);
        }
        if (head == "restrict") {
            auto semi = rest.find(';');
            if (semi == std::string::npos)
                throw UsageError("restrict psi: expected restrict:<predicate>;<base>");
            SupportPredicate pred = parse_predicate(rest.substr(0, semi));
            PsiSpec base = parse_psi(rest.substr(semi + 1));
            return make_psi_restricted(std::move(pred), std::move(base));
        }
    } catch (const UsageError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw UsageError("psi expression '" + body + "': " + e.what());
    }
    throw UsageError("unknown psi kind '" + head + "'");
}

std::string psi_to_text(const PsiSpec& spec) {
    switch (spec.kind) {
        case PsiSpec::Kind::Constant:
            return "const:" + format_double(spec.c);
        case PsiSpec::Kind::PowerLaw:
            return "pow:c=" + format_double(spec.c) + ",s=" + format_double(spec.s);
        case PsiSpec::Kind::PowerLog:
            return "powlog:t=" + format_double(spec.t);
        case PsiSpec::Kind::Table:
            if (spec.table_path.empty())
                throw UsageError("in-memory psi tables have no text form");
            return "table:" + spec.table_path;
        case PsiSpec::Kind::Restricted:
            return "restrict:" + predicate_to_text(spec.support) + ";" +
                   psi_to_text(*spec.restricted_base);
        case PsiSpec::Kind::EpsilonOverQ:
            return "eps_over_q:" + format_double(spec.eps);
        case PsiSpec::Kind::Custom:
            throw UsageError("custom psi rules have no text form");
    }
    throw std::logic_error("psi_to_text: unreachable");
}

// ---------------------------------------------------------------------------
// Exponent heuristics and density profiles
// ---------------------------------------------------------------------------

ExponentReport d_exponent_estimate(const PsiSpec& spec, std::vector<double> s_grid,
                                   std::uint64_t Q) {
    if (Q == 0) throw std::invalid_argument("d_exponent_estimate: Q must be >= 1");
    if (s_grid.empty()) throw std::invalid_argument("d_exponent_estimate: empty s grid");
    for (double s : s_grid)
        if (!std::isfinite(s) || s < 0.0 || s > 1.0)
            throw std::invalid_argument("d_exponent_estimate: s values must lie in [0, 1]");
    std::sort(s_grid.begin(), s_grid.end());

    std::vector<std::uint64_t> marks;
    for (std::uint64_t mark : {Q / 4, Q / 2, Q}) {
        if (mark >= 1 && (marks.empty() || mark > marks.back())) marks.push_back(mark);
    }

    ExponentReport report;
    for (double s : s_grid) {
        ExponentEntry entry;
        entry.s = s;
        KahanSum sum;
        std::size_t next_mark = 0;
        for (std::uint64_t q = 1; q <= Q; ++q) {
            double psi = eval_psi(spec, q);
            if (psi > 0.0) {
                double ratio = psi / static_cast<double>(q);
                sum.add(static_cast<double>(q) * std::pow(ratio, s));
            }
            while (next_mark < marks.size() && marks[next_mark] == q) {
                entry.checkpoints.push_back({q, sum.total()});
                ++next_mark;
            }
        }
        entry.partial_sum = sum.total();
        if (entry.checkpoints.size() >= 3) {
            std::size_t n = entry.checkpoints.size();
            double last = entry.checkpoints[n - 1].partial_sum - entry.checkpoints[n - 2].partial_sum;
            double prev = entry.checkpoints[n - 2].partial_sum - entry.checkpoints[n - 3].partial_sum;
            entry.octave_ratio = prev > 0.0 ? last / prev : 0.0;
        } else {
            entry.octave_ratio = entry.partial_sum > 0.0 ? 1.0 : 0.0;
        }
        entry.growing = entry.octave_ratio >= 0.95;
        report.entries.push_back(std::move(entry));
    }

    report.s_low = 0.0;
    report.s_high = 1.0;
    for (const ExponentEntry& e : report.entries)
        if (e.growing) report.s_low = std::max(report.s_low, e.s);
    for (const ExponentEntry& e : report.entries)
        if (!e.growing) {
            report.s_high = e.s;
            break;  // entries are sorted by s
        }
    return report;
}

std::vector<DensityPoint> density_profile(const SupportPredicate& pred,
                                          const std::vector<std::uint64_t>& N_grid) {
    if (N_grid.empty()) throw std::invalid_argument("density_profile: empty N grid");
    for (std::size_t i = 0; i < N_grid.size(); ++i) {
        if (N_grid[i] == 0) throw std::invalid_argument("density_profile: N must be >= 1");
        if (i && N_grid[i] <= N_grid[i - 1])
            throw std::invalid_argument("density_profile: N grid must be strictly ascending");
    }
    std::uint64_t maxN = N_grid.back();

    std::vector<DensityPoint> out;
    out.reserve(N_grid.size());
    std::uint64_t count = 0;
    std::size_t grid_pos = 0;

    auto flush = [&](std::uint64_t n) {
        while (grid_pos < N_grid.size() && N_grid[grid_pos] == n) {
            DensityPoint point;
            point.N = n;
            point.count = count;
            point.density = static_cast<double>(count) / static_cast<double>(n);
            double logn = std::log(static_cast<double>(n));
            double nan = std::numeric_limits<double>::quiet_NaN();
            point.ratio_upper =
                n >= 3 ? point.density / (std::log(logn) / (logn * logn)) : nan;
            point.ratio_lower = n >= 2 ? point.density * (logn * logn) : nan;
            out.push_back(point);
            ++grid_pos;
        }
    };

    if (pred.kind == SupportPredicate::Kind::Primes && maxN >= 10000) {
        // Sieve once instead of trial-dividing every n.
        std::vector<std::uint64_t> primes = primes_up_to(maxN);
        std::size_t prime_pos = 0;
        for (std::uint64_t n = 1; n <= maxN; ++n) {
            if (prime_pos < primes.size() && primes[prime_pos] == n) {
                ++count;
                ++prime_pos;
            }
            flush(n);
        }
    } else {
        for (std::uint64_t n = 1; n <= maxN; ++n) {
            if (predicate_contains(pred, n)) ++count;
            flush(n);
        }
    }
    return out;
}

}  // namespace copra
