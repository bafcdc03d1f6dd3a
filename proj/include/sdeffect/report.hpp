#pragma once

// Report tables and the command-level operations behind the CLI.

#include "sdeffect/config.hpp"
#include "sdeffect/counting.hpp"
#include "sdeffect/exact_dist.hpp"
#include "sdeffect/kelly.hpp"
#include "sdeffect/table_sim.hpp"
#include "sdeffect/verify.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace sdeffect {

enum class OutputFormat { Table, Csv, Json };

inline OutputFormat parse_format(std::string_view s) {
    if (s == "table") {
        return OutputFormat::Table;
    }
    if (s == "csv") {
        return OutputFormat::Csv;
    }
    if (s == "json") {
        return OutputFormat::Json;
    }
    throw Error(ErrorKind::ParseError, "unknown format '" + std::string(s) + "'");
}

struct ReportTable {
    std::string title;
    std::string corner;
    std::vector<std::string> row_labels;
    std::vector<std::string> column_labels;
    std::vector<std::vector<double>> cells;
    /// Display digits per column; empty means `precision` everywhere.
    std::vector<int> column_precision;
    int precision = 3;
    std::vector<std::string> notes;
    /// (row, column) -> footnote marker appended in the human rendering.
    std::map<std::pair<std::size_t, std::size_t>, std::string> markers;

    int digits(std::size_t column) const {
        return column < column_precision.size() ? column_precision[column] : precision;
    }

    double at(const std::string& row, const std::string& column) const {
        for (std::size_t r = 0; r < row_labels.size(); ++r) {
            if (row_labels[r] != row) {
                continue;
            }
            for (std::size_t c = 0; c < column_labels.size(); ++c) {
                if (column_labels[c] == column) {
                    return cells[r][c];
                }
            }
        }
        throw Error(ErrorKind::NotFound, "no cell " + row + "/" + column + " in " + title);
    }

    bool well_formed() const {
        if (cells.size() != row_labels.size()) {
            return false;
        }
        for (const auto& row : cells) {
            if (row.size() != column_labels.size()) {
                return false;
            }
        }
        return true;
    }
};

namespace detail {

inline std::string fixed(double v, int digits) {
    if (std::isnan(v)) {
        return "-";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    std::string s = buf;
    if (s == "-0" || s.find_first_not_of("-0.") == std::string::npos) {
        if (!s.empty() && s[0] == '-') {
            s.erase(0, 1);
        }
    }
    return s;
}

inline std::string full(double v) {
    if (std::isnan(v)) {
        return "";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

inline std::size_t display_width(const std::string& s) {
    std::size_t w = 0;
    for (unsigned char c : s) {
        if ((c & 0xC0) != 0x80) {
            ++w;
        }
    }
    return w;
}

inline std::string pad(const std::string& s, std::size_t width, bool left) {
    const std::size_t w = display_width(s);
    if (w >= width) {
        return s;
    }
    return left ? s + std::string(width - w, ' ') : std::string(width - w, ' ') + s;
}

inline nlohmann::json json_number(double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); }

} // namespace detail

inline std::string render_text(const ReportTable& t) {
    std::vector<std::vector<std::string>> grid;
    grid.push_back({t.corner});
    for (const auto& c : t.column_labels) {
        grid.back().push_back(c);
    }
    for (std::size_t r = 0; r < t.row_labels.size(); ++r) {
        std::vector<std::string> row{t.row_labels[r]};
        for (std::size_t c = 0; c < t.column_labels.size(); ++c) {
            std::string cell = detail::fixed(t.cells[r][c], t.digits(c));
            if (auto it = t.markers.find({r, c}); it != t.markers.end()) {
                cell += " (" + it->second + ")";
            }
            row.push_back(cell);
        }
        grid.push_back(std::move(row));
    }
    std::vector<std::size_t> widths(t.column_labels.size() + 1, 0);
    for (const auto& row : grid) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            widths[c] = std::max(widths[c], detail::display_width(row[c]));
        }
    }
    std::ostringstream out;
    if (!t.title.empty()) {
        out << t.title << "\n";
    }
    for (std::size_t r = 0; r < grid.size(); ++r) {
        for (std::size_t c = 0; c < grid[r].size(); ++c) {
            out << (c == 0 ? "" : "  ") << detail::pad(grid[r][c], widths[c], c == 0);
        }
        out << "\n";
        if (r == 0) {
            std::size_t total = 0;
            for (auto w : widths) {
                total += w + 2;
            }
            out << std::string(total > 2 ? total - 2 : 0, '-') << "\n";
        }
    }
    for (const auto& note : t.notes) {
        out << note << "\n";
    }
    return out.str();
}

/// Header row then one row per label; numbers at full precision.
inline std::string render_csv(const ReportTable& t) {
    std::ostringstream out;
    out << detail::csv_field(t.corner.empty() ? "row" : t.corner);
    for (const auto& c : t.column_labels) {
        out << "," << detail::csv_field(c);
    }
    out << "\r\n";
    for (std::size_t r = 0; r < t.row_labels.size(); ++r) {
        out << detail::csv_field(t.row_labels[r]);
        for (double v : t.cells[r]) {
            out << "," << detail::full(v);
        }
        out << "\r\n";
    }
    return out.str();
}

inline nlohmann::json to_json(const ReportTable& t) {
    nlohmann::json j;
    j["title"] = t.title;
    j["columns"] = t.column_labels;
    j["rows"] = nlohmann::json::array();
    for (std::size_t r = 0; r < t.row_labels.size(); ++r) {
        nlohmann::json values = nlohmann::json::array();
        for (double v : t.cells[r]) {
            values.push_back(detail::json_number(v));
        }
        j["rows"].push_back({{"label", t.row_labels[r]}, {"values", values}});
    }
    j["notes"] = t.notes;
    j["markers"] = nlohmann::json::array();
    for (const auto& [rc, marker] : t.markers) {
        j["markers"].push_back({{"row", rc.first}, {"column", rc.second}, {"marker", marker}});
    }
    return j;
}

inline std::string render(const ReportTable& t, OutputFormat format) {
    switch (format) {
    case OutputFormat::Table: return render_text(t);
    case OutputFormat::Csv: return render_csv(t);
    case OutputFormat::Json: return to_json(t).dump(2) + "\n";
    }
    return {};
}

// ---------------------------------------------------------------------------
// systems
// ---------------------------------------------------------------------------

inline ReportTable cmd_systems(const std::vector<CatalogEntry>& entries = catalog()) {
    ReportTable t;
    t.title = "Standard deviation of count-system weights (full deck)";
    t.corner = "system";
    t.column_labels = {"sigma0", "published"};
    bool any_published_only = false;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        t.row_labels.push_back(e.display_name);
        t.cells.push_back({e.resolved_sigma0(), e.published_sigma0});
        if (!e.system) {
            t.markers[{i, 0}] = "p";
            any_published_only = true;
        }
    }
    if (any_published_only) {
        t.notes.push_back("(p) no weight list registered; published figure shown");
    }
    return t;
}

// ---------------------------------------------------------------------------
// sigma-table
// ---------------------------------------------------------------------------

struct SigmaTableRequest {
    std::string label = "hi-lo";
    double sigma0 = 0.0;
    int decks = 8;
    double penetration = 0.5;
    int seats = 7;
    std::vector<int> positions{1, 4, 7};
    HandLengthLaw law = HandLengthLaw::standard();
    TcUnits units = TcUnits::Deck;
};

/// sigma_BET and sigma_PLAY per position from sqrt(n) Sigma0 / N with the seat
/// model's card counts; N = 52 decks (1 - penetration) at the bet moment.
inline ReportTable cmd_sigma_table(const SigmaTableRequest& req) {
    if (!(req.penetration > 0.0 && req.penetration < 1.0)) {
        throw Error(ErrorKind::BadPenetration, "penetration must lie in (0, 1)");
    }
    if (req.decks < 1) {
        throw Error(ErrorKind::BadRange, "decks must be >= 1");
    }
    const double remaining = 52.0 * req.decks * (1.0 - req.penetration);
    ReportTable t;
    char head[160];
    std::snprintf(head, sizeof head, "%s (Sigma0 = %.3f), %d-deck shoe, %.1f%% played, %s units", req.label.c_str(),
                  req.sigma0, req.decks, 100.0 * req.penetration, req.units == TcUnits::Deck ? "deck" : "card");
    t.title = head;
    t.corner = "position";
    t.row_labels = {"sigma_BET", "sigma_PLAY"};
    t.cells.assign(2, {});
    for (std::size_t i = 0; i < req.positions.size(); ++i) {
        const int pos = req.positions[i];
        const SeatCardModel model = make_seat_model(req.seats, pos, req.law);
        const double n_bet = n_cards_between(model, MomentPair::BetToPlay);
        const double n_play = n_cards_between(model, MomentPair::PlayToDealer);
        t.column_labels.push_back(std::to_string(pos));
        t.cells[0].push_back(sigma_n_approx(remaining, n_bet, req.sigma0, req.units));
        t.cells[1].push_back(sigma_n_approx(remaining, n_play, req.sigma0, req.units));
        if (pos == req.seats && req.seats > 1) {
            t.markers[{1, i}] = "a";
        }
    }
    if (!t.markers.empty()) {
        char note[200];
        std::snprintf(note, sizeof note,
                      "(a) last seat: n_play = one hand's extra cards (%.3g); some published tables list half of "
                      "this value",
                      req.law.mean_extra());
        t.notes.push_back(note);
    }
    return t;
}

// ---------------------------------------------------------------------------
// exact
// ---------------------------------------------------------------------------

struct ExactReport {
    TrueCountDistribution distribution;
    TcUnits units;
    Rational tc_before;
    Rational mean;
    Rational variance_from_law;
    ExactSigma closed_form;
    ExactSigma sigma1;
    bool mean_matches = false;
    bool variance_matches = false;
};

inline ExactReport cmd_exact(const WeightComposition& comp, int n, TcUnits units = TcUnits::Deck) {
    auto dist = tc_distribution(comp, n);
    const Rational mean = dist.mean();
    const Rational var = dist.variance();
    const ExactSigma closed = sigma_n_exact(comp, n);
    const Rational before = true_count(comp);
    ExactReport r{std::move(dist), units, before, mean, var, closed, sigma1_exact(comp), false, false};
    r.mean_matches = mean == before;
    r.variance_matches = var == closed.squared;
    return r;
}

inline nlohmann::json to_json(const TrueCountDistribution& dist) {
    nlohmann::json atoms = nlohmann::json::array();
    for (const auto& a : dist.atoms()) {
        atoms.push_back({{"value", to_fraction_string(a.value)}, {"prob", to_fraction_string(a.probability)}});
    }
    return {{"n", dist.removed()}, {"atoms", atoms}};
}

inline std::string render(const ExactReport& r, OutputFormat format) {
    const double scale = unit_scale(r.units);
    const char* unit_name = r.units == TcUnits::Deck ? "deck" : "card";
    const int total = r.distribution.source().size();
    switch (format) {
    case OutputFormat::Json: {
        nlohmann::json j = to_json(r.distribution);
        j["composition"] = r.distribution.source().str();
        j["N"] = total;
        j["units"] = unit_name;
        j["tc_before"] = to_fraction_string(r.tc_before);
        j["mean"] = to_fraction_string(r.mean);
        j["variance"] = to_fraction_string(r.variance_from_law);
        j["sigma_n_squared_closed_form"] = to_fraction_string(r.closed_form.squared);
        j["sigma_n"] = r.closed_form.value * scale;
        j["sigma_1"] = r.sigma1.value * scale;
        j["tc_before_scaled"] = to_double(r.tc_before) * scale;
        j["mean_matches"] = r.mean_matches;
        j["variance_matches"] = r.variance_matches;
        return j.dump(2) + "\n";
    }
    case OutputFormat::Csv: {
        std::ostringstream out;
        out << "value,prob,value_" << unit_name << ",prob_real\r\n";
        for (const auto& a : r.distribution.atoms()) {
            out << to_fraction_string(a.value) << "," << to_fraction_string(a.probability) << ","
                << detail::full(to_double(a.value) * scale) << "," << detail::full(to_double(a.probability)) << "\r\n";
        }
        return out.str();
    }
    case OutputFormat::Table: break;
    }
    std::ostringstream out;
    out << "composition " << r.distribution.source().str() << "  (N = " << total << ", n = " << r.distribution.removed()
        << ")\n";
    out << "true count (card units) after removal:\n";
    for (const auto& a : r.distribution.atoms()) {
        out << "  " << detail::pad(to_fraction_string(a.value), 12, true) << "  p = " << to_fraction_string(a.probability)
            << "\n";
    }
    out << "mean            " << to_fraction_string(r.mean) << (r.mean_matches ? "  (= R/N)" : "  (MISMATCH with R/N)")
        << "\n";
    out << "variance        " << to_fraction_string(r.variance_from_law)
        << (r.variance_matches ? "  (= closed form)" : "  (MISMATCH with closed form)") << "\n";
    char line[160];
    std::snprintf(line, sizeof line, "true count      %.6f %s units\n", to_double(r.tc_before) * scale, unit_name);
    out << line;
    std::snprintf(line, sizeof line, "sigma_1         %.6f %s units\n", r.sigma1.value * scale, unit_name);
    out << line;
    std::snprintf(line, sizeof line, "sigma_n         %.6f %s units\n", r.closed_form.value * scale, unit_name);
    out << line;
    return out.str();
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

enum class VerifyScope { Lemmas, Theorem, Kelly, All };

inline VerifyScope parse_scope(std::string_view s) {
    if (s == "lemmas") {
        return VerifyScope::Lemmas;
    }
    if (s == "theorem") {
        return VerifyScope::Theorem;
    }
    if (s == "kelly") {
        return VerifyScope::Kelly;
    }
    if (s == "all") {
        return VerifyScope::All;
    }
    throw Error(ErrorKind::ParseError, "unknown verify scope '" + std::string(s) + "'");
}

struct VerifyReport {
    std::vector<CheckResult> checks;

    bool passed() const {
        for (const auto& c : checks) {
            if (!c.passed()) {
                return false;
            }
        }
        return !checks.empty();
    }
};

inline VerifyReport cmd_verify(VerifyScope scope, std::uint64_t seed, int theorem_max_total = 30) {
    VerifyReport report;
    if (scope == VerifyScope::Lemmas || scope == VerifyScope::All) {
        for (auto& c : run_lemma_suite(seed).all()) {
            report.checks.push_back(std::move(c));
        }
    }
    if (scope == VerifyScope::Theorem || scope == VerifyScope::All) {
        report.checks.push_back(check_theorem_sweep(theorem_max_total));
        CheckResult direct{"expected_tc and sigma_n_exact on worked examples", 0, 0, {}};
        const auto comp = WeightComposition::parse("+1:5,-1:5,0:3");
        for (int n = 1; n < comp.size(); ++n) {
            const bool ok = expected_tc(comp, n) == 0 &&
                            sigma_n_exact(comp, n).squared == tc_distribution(comp, n).variance();
            direct.record(ok, [n] { return "13-card example, n=" + std::to_string(n); });
        }
        report.checks.push_back(std::move(direct));
    }
    if (scope == VerifyScope::Kelly || scope == VerifyScope::All) {
        for (auto& c : run_kelly_suite().all()) {
            report.checks.push_back(std::move(c));
        }
    }
    return report;
}

inline ReportTable to_table(const VerifyReport& report) {
    ReportTable t;
    t.title = "Verification";
    t.corner = "check";
    t.column_labels = {"instances", "failures"};
    t.precision = 0;
    for (const auto& c : report.checks) {
        t.row_labels.push_back(c.name);
        t.cells.push_back({static_cast<double>(c.instances), static_cast<double>(c.failures)});
        if (!c.passed()) {
            t.notes.push_back("FAIL " + c.name + ": " + c.first_failure);
        }
    }
    t.notes.push_back(report.passed() ? "all checks passed" : "verification FAILED");
    return t;
}

// ---------------------------------------------------------------------------
// kelly / longrun
// ---------------------------------------------------------------------------

/// Growth statistics for win probability p, optionally with a random-advantage variance.
inline ReportTable cmd_kelly(double p, double var_p0 = 0.0, double hands = 10000.0) {
    const GrowthStats g = growth_stats_binomial(p);
    const auto opt = verify_kelly_optimality(p);
    const double eps = p - 0.5;
    ReportTable t;
    char title[64];
    std::snprintf(title, sizeof title, "Kelly betting at p = %g", p);
    t.title = title;
    t.corner = "quantity";
    t.column_labels = {"value"};
    t.precision = 8;
    auto row = [&](std::string label, double v) {
        t.row_labels.push_back(std::move(label));
        t.cells.push_back({v});
    };
    row("kelly fraction", kelly_fraction(p));
    row("numeric argmax", opt.argmax);
    row("E(G_1)", g.mean);
    row("2 eps^2", 2.0 * eps * eps);
    row("Var(G_1)", g.variance);
    row("sigma(G_n)", g.stddev_after(hands));
    row("2 eps / sqrt(n)", 2.0 * eps / std::sqrt(hands));
    if (var_p0 > 0.0) {
        const GrowthStats fz = growth_var_fuzzy(make_fuzzy_advantage(p, var_p0));
        row("fuzzy E(G_1)", fz.mean);
        row("fuzzy Var(G_1)", fz.variance);
        row("fuzzy sigma(G_n)", fz.stddev_after(hands));
    }
    t.notes.push_back("n = " + std::to_string(static_cast<long long>(hands)) + " hands");
    t.notes.push_back(opt.passed ? "optimality check passed" : "optimality check FAILED");
    return t;
}

/// Long run for two sigma_BET values, with favorable-to-total hand extrapolations.
inline ReportTable cmd_longrun(double eps, double sigma_a, double sigma_b, double threshold = 2.0,
                               double hands_per_hour = 50.0) {
    const double na = long_run(eps, sigma_a, threshold);
    const double nb = long_run(eps, sigma_b, threshold);
    ReportTable t;
    t.title = "Long run (favorable hands for E(G)/sigma(G) >= " + detail::full(threshold) + ")";
    t.corner = "case";
    t.column_labels = {"sigma_bet^2", "favorable hands", "total hands x2", "total hands x2.5", "hours x2.5"};
    t.column_precision = {4, 1, 1, 1, 1};
    auto row = [&](std::string label, double s2, double n) {
        t.row_labels.push_back(std::move(label));
        t.cells.push_back({s2, n, 2.0 * n, 2.5 * n, 2.5 * n / hands_per_hour});
    };
    row("a", sigma_a * sigma_a, na);
    row("b", sigma_b * sigma_b, nb);
    row("b - a", sigma_b * sigma_b - sigma_a * sigma_a, nb - na);
    char note[160];
    std::snprintf(note, sizeof note, "relative difference %.4f%%; %g hands per hour", 100.0 * (nb - na) / na,
                  hands_per_hour);
    t.notes.push_back(note);
    return t;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateRequest {
    enum class Mode { Seat, Bankroll };
    Mode mode = Mode::Seat;
    std::optional<CountSystem> system;
    SeatSimulationConfig seat;
    BankrollSimulationConfig bankroll;
};

/// Recognized keys: mode (seat|bankroll), seed, trials, workers; seat: system,
/// system_file, decks, penetration, seats, position, hand_mean, hand_law
/// (comma-separated probabilities of 0, 1, 2... extra cards); bankroll: p,
/// var_p0, hands, fraction.
inline SimulateRequest parse_simulate_config(const KeyValueConfig& cfg) {
    static const std::vector<std::string> known{"mode",     "seed",     "trials", "workers", "system",
                                                "system_file", "decks", "penetration", "seats", "position",
                                                "hand_mean", "hand_law", "p", "var_p0", "hands", "fraction"};
    for (const auto& [key, entry] : cfg.entries()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw Error(ErrorKind::ConfigError, "line " + std::to_string(entry.line) + ": unknown key '" + key + "'");
        }
    }
    SimulateRequest req;
    std::string mode = cfg.has("mode") ? cfg.require("mode").value : "seat";
    if (mode == "bankroll") {
        req.mode = SimulateRequest::Mode::Bankroll;
    } else if (mode != "seat") {
        throw Error(ErrorKind::ConfigError, "line " + std::to_string(cfg.require("mode").line) + ": unknown mode '" +
                                                mode + "'");
    }
    const std::uint64_t seed = cfg.get("seed", [](const std::string& v) { return parse_seed(v); });
    const long long trials = cfg.get("trials", [](const std::string& v) { return parse_integer(v); });
    if (trials < 1) {
        throw Error(ErrorKind::ConfigError, "line " + std::to_string(cfg.require("trials").line) +
                                                ": trials must be >= 1");
    }
    unsigned workers = 0;
    if (cfg.has("workers")) {
        workers = static_cast<unsigned>(cfg.get("workers", [](const std::string& v) { return parse_integer(v); }));
    }
    auto opt_int = [&](const std::string& key, long long fallback) {
        return cfg.has(key) ? cfg.get(key, [](const std::string& v) { return parse_integer(v); }) : fallback;
    };
    auto opt_real = [&](const std::string& key, double fallback) {
        return cfg.has(key) ? cfg.get(key, [](const std::string& v) { return parse_real(v); }) : fallback;
    };

    if (req.mode == SimulateRequest::Mode::Seat) {
        if (cfg.has("system_file")) {
            req.system = cfg.get("system_file", [](const std::string& v) { return load_count_system(v); });
        } else {
            req.system = cfg.get("system", [](const std::string& v) { return find_system(v); });
        }
        auto& s = req.seat;
        s.seed = seed;
        s.trials = static_cast<std::size_t>(trials);
        s.workers = workers;
        s.decks = static_cast<int>(opt_int("decks", 8));
        s.penetration = opt_real("penetration", 0.5);
        HandLengthLaw law = HandLengthLaw::standard();
        if (cfg.has("hand_law")) {
            law = cfg.get("hand_law", [](const std::string& v) {
                std::vector<double> probs;
                std::stringstream ss(v);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    probs.push_back(parse_real(item));
                }
                return HandLengthLaw(probs);
            });
        } else if (cfg.has("hand_mean")) {
            law = cfg.get("hand_mean", [](const std::string& v) { return HandLengthLaw::with_mean(parse_real(v)); });
        }
        const int seats = static_cast<int>(opt_int("seats", 7));
        const int position = static_cast<int>(opt_int("position", 1));
        try {
            s.model = make_seat_model(seats, position, law);
        } catch (const Error& e) {
            throw Error(ErrorKind::ConfigError, e.what());
        }
    } else {
        auto& b = req.bankroll;
        b.seed = seed;
        b.trials = static_cast<std::size_t>(trials);
        b.workers = workers;
        b.hands = static_cast<std::size_t>(opt_int("hands", 40000));
        const double p = cfg.get("p", [](const std::string& v) { return parse_real(v); });
        const double var = opt_real("var_p0", 0.0);
        b.model = var > 0.0 ? AdvantageModel::two_point(p, var) : AdvantageModel::fixed(p);
        if (cfg.has("fraction")) {
            b.model.forced_fraction = opt_real("fraction", 0.0);
        }
    }
    return req;
}

inline SimulationReport cmd_simulate(const SimulateRequest& req) {
    if (req.mode == SimulateRequest::Mode::Seat) {
        return simulate_seat_sigma(*req.system, req.seat);
    }
    return simulate_bankroll(req.bankroll);
}

inline ReportTable to_table(const SimulationReport& r) {
    ReportTable t;
    t.title = r.kind + " simulation, " + std::to_string(r.trials) + " trials, seed " + std::to_string(r.seed);
    t.corner = "statistic";
    t.column_labels = {"mean", "stddev", "std_error", "predicted_mean", "predicted_stddev", "predicted_stddev_finite"};
    t.precision = 6;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& s : r.stats) {
        t.row_labels.push_back(s.name);
        t.cells.push_back({s.mean, s.stddev, s.std_error, r.prediction(s.name + ".mean").value_or(nan),
                           r.prediction(s.name + ".stddev").value_or(nan),
                           r.prediction(s.name + ".stddev_finite").value_or(nan)});
        if (!s.sufficient) {
            t.notes.push_back(s.name + ": insufficient sample for a standard deviation");
        }
    }
    for (const auto& [k, v] : r.config) {
        t.notes.push_back(k + " = " + v);
    }
    return t;
}

} // namespace sdeffect
