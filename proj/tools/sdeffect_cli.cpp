#include "sdeffect/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>

namespace {

using namespace sdeffect;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

struct GlobalOptions {
    std::string format = "table";
    std::string units = "deck";
};

TcUnits parse_units(const std::string& s) {
    if (s == "deck") {
        return TcUnits::Deck;
    }
    if (s == "card") {
        return TcUnits::Card;
    }
    throw Error(ErrorKind::ParseError, "unknown units '" + s + "' (expected deck or card)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"True-count dispersion, Kelly growth and seat-position reports"};
    app.require_subcommand(1);
    GlobalOptions global;
    app.add_option("--format", global.format, "Output format")
        ->check(CLI::IsMember({"table", "csv", "json"}))
        ->capture_default_str();
    app.add_option("--units", global.units, "True-count units")
        ->check(CLI::IsMember({"deck", "card"}))
        ->capture_default_str();

    // systems
    auto* systems = app.add_subcommand("systems", "Sigma0 of the built-in count systems");

    // sigma-table
    auto* sigma = app.add_subcommand("sigma-table", "sigma_BET / sigma_PLAY by seat position");
    std::string sigma_system = "hi-lo";
    std::string sigma_system_file;
    std::string penetration_text = "1/2";
    int decks = 8;
    int seats = 7;
    std::vector<int> positions{1, 4, 7};
    double hand_mean = 0.0;
    sigma->add_option("--system", sigma_system, "Catalog key")->capture_default_str();
    sigma->add_option("--system-file", sigma_system_file, "Count definition file (rank weight per line)");
    sigma->add_option("--decks", decks)->capture_default_str();
    sigma->add_option("--penetration", penetration_text, "Fraction dealt, decimal or p/q")->capture_default_str();
    sigma->add_option("--seats", seats)->capture_default_str();
    sigma->add_option("--position", positions, "Seat positions (1 = first base)")->delimiter(',');
    sigma->add_option("--hand-mean", hand_mean, "Mean cards per player hand (default law: 2.6)");

    // exact
    auto* exact = app.add_subcommand("exact", "Exact true-count law after n unseen removals");
    std::string composition;
    int removed = 1;
    exact->add_option("-c,--composition", composition, "Remaining cards, e.g. \"+1:5,-1:5,0:3\"")->required();
    exact->add_option("-n,--n", removed, "Cards removed unseen")->required();

    // verify
    auto* verify = app.add_subcommand("verify", "Run the exact property suites");
    std::string scope = "all";
    std::uint64_t verify_seed = 1;
    int theorem_max = 30;
    verify->add_option("scope", scope, "lemmas | theorem | kelly | all")
        ->check(CLI::IsMember({"lemmas", "theorem", "kelly", "all"}))
        ->capture_default_str();
    verify->add_option("--seed", verify_seed)->capture_default_str();
    verify->add_option("--max-total", theorem_max, "Largest composition size for the theorem sweep")
        ->capture_default_str();

    // kelly
    auto* kelly = app.add_subcommand("kelly", "Kelly fraction and growth moments");
    double p = 0.51;
    double var_p0 = 0.0;
    double hands = 10000.0;
    kelly->add_option("--p", p, "Win probability")->capture_default_str();
    kelly->add_option("--var-p0", var_p0, "Variance of a random advantage")->capture_default_str();
    kelly->add_option("--hands", hands)->capture_default_str();

    // longrun
    auto* longrun = app.add_subcommand("longrun", "Long-run hand counts for two sigma_BET values");
    double eps = 0.01;
    double sigma_a = 0.0;
    double sigma_b = 0.0;
    double gap = -1.0;
    double threshold = 2.0;
    longrun->add_option("--eps", eps, "Edge p - 1/2")->capture_default_str();
    longrun->add_option("--sigma-a", sigma_a)->capture_default_str();
    auto* sigma_b_opt = longrun->add_option("--sigma-b", sigma_b);
    longrun->add_option("--gap", gap, "sigma_b^2 - sigma_a^2 (alternative to --sigma-b)")->excludes(sigma_b_opt);
    longrun->add_option("--threshold", threshold)->capture_default_str();

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo seat or bankroll simulation");
    std::string config_path;
    std::map<std::string, std::string> overrides;
    simulate->add_option("--config", config_path, "key = value file")->required()->check(CLI::ExistingFile);
    for (const char* key : {"system", "system-file", "decks", "penetration", "seats", "position", "trials", "seed"}) {
        std::string cfg_key = key;
        std::replace(cfg_key.begin(), cfg_key.end(), '-', '_');
        simulate->add_option_function<std::string>(
            std::string("--") + key, [&overrides, cfg_key](const std::string& v) { overrides[cfg_key] = v; },
            "Override config key " + cfg_key);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        const OutputFormat format = parse_format(global.format);
        const TcUnits units = parse_units(global.units);

        if (*systems) {
            std::cout << render(cmd_systems(), format);
        } else if (*sigma) {
            SigmaTableRequest req;
            if (!sigma_system_file.empty()) {
                const CountSystem sys = load_count_system(sigma_system_file);
                req.label = sys.name();
                req.sigma0 = sdeffect::sigma0(sys);
            } else {
                const CatalogEntry& entry = find_catalog_entry(sigma_system);
                req.label = entry.display_name;
                req.sigma0 = entry.resolved_sigma0();
            }
            req.decks = decks;
            req.penetration = parse_real(penetration_text);
            req.seats = seats;
            req.positions = positions;
            for (int pos : positions) {
                make_seat_model(seats, pos);
            }
            if (hand_mean > 0.0) {
                req.law = HandLengthLaw::with_mean(hand_mean);
            }
            req.units = units;
            std::cout << render(cmd_sigma_table(req), format);
        } else if (*exact) {
            std::cout << render(cmd_exact(WeightComposition::parse(composition), removed, units), format);
        } else if (*verify) {
            const VerifyReport report = cmd_verify(parse_scope(scope), verify_seed, theorem_max);
            std::cout << render(to_table(report), format);
            return report.passed() ? kExitOk : kExitVerifyFailed;
        } else if (*kelly) {
            std::cout << render(cmd_kelly(p, var_p0, hands), format);
        } else if (*longrun) {
            if (gap >= 0.0) {
                sigma_b = std::sqrt(sigma_a * sigma_a + gap);
            }
            std::cout << render(cmd_longrun(eps, sigma_a, sigma_b, threshold), format);
        } else if (*simulate) {
            std::ifstream in(config_path);
            KeyValueConfig cfg = KeyValueConfig::parse(in);
            for (const auto& [k, v] : overrides) {
                cfg.set(k, v);
            }
            std::cout << render(to_table(cmd_simulate(parse_simulate_config(cfg))), format);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}
