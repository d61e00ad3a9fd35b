#include "subnetsim/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "subnetsim/campaign.hpp"
#include "subnetsim/config.hpp"
#include "subnetsim/output.hpp"
#include "subnetsim/random.hpp"
#include "subnetsim/topology.hpp"

namespace subnetsim {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Monte-Carlo uplink simulator for coexisting distributed-MIMO sub-networks under LBT", "subnetsim"};

    std::string config_path;
    std::string out_dir = "results";
    std::vector<std::string> sets;
    int threads = 0;
    bool svg = false;
    bool dump_topology = false;
    bool quiet = false;
    ConfigOverrides overrides;

    auto add_override = [&app, &overrides](const std::string& flag, const std::string& key, const std::string& help) {
        return app.add_option_function<std::string>(
            flag, [&overrides, key](const std::string& v) { overrides.emplace_back(key, v); }, help);
    };

    app.add_option("--config", config_path, "Scenario file (key = value lines)");
    add_override("--subnetworks", "num_subnetworks", "Number of sub-networks B");
    add_override("--aps-per-subnetwork", "aps_per_subnetwork", "APs per sub-network A_b");
    add_override("--power-mode", "power_mode", "fixed or apr")->check(CLI::IsMember({"fixed", "apr"}));
    add_override("--fixed-power-dbm", "fixed_power_dbm", "Sensor power for the fixed mode");
    add_override("--drops", "num_drops", "Monte-Carlo drops");
    add_override("--seed", "master_seed", "Master seed");
    app.add_option("--set", sets, "Extra key=value override (repeatable)");
    app.add_option("--out", out_dir, "Output directory")->capture_default_str();
    app.add_option("--threads", threads, "Worker threads (0 = all cores, capped by SUBNETSIM_THREADS)");
    app.add_flag("--svg", svg, "Also write rate_cdf.svg");
    app.add_flag("--dump-topology", dump_topology, "Write topology.csv for drop 0");
    app.add_flag("--quiet", quiet, "No progress output");

    std::vector<std::string> argv_storage{"subnetsim"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_storage) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) {
            err << "error: --set expects key=value, got '" << s << "'\n";
            return kExitUsage;
        }
        overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }

    if (config_path.empty() && overrides.empty()) {
        err << "error: give --config or scenario overrides\n" << app.help();
        return kExitUsage;
    }

    SimConfig cfg;
    try {
        const std::string text = config_path.empty() ? std::string{} : read_file(config_path);
        cfg = parse_config(text, overrides);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitUsage;
    }

    CampaignResult result;
    try {
        ProgressCallback progress;
        if (!quiet) {
            const int step = std::max(1, cfg.num_drops / 20);
            progress = [&err, step](int done, int total) {
                if (done % step == 0 || done == total) err << "\rdrops " << done << '/' << total << std::flush;
            };
        }
        result = run_campaign(cfg, threads, progress);
        if (!quiet) err << '\n';
    } catch (const std::exception& e) {
        err << "campaign failed: " << e.what() << '\n';
        return kExitCampaign;
    }

    try {
        const auto manifest = write_campaign_outputs(result, out_dir, {svg});
        if (dump_topology) {
            Rng rng = make_stream(drop_seed(cfg.master_seed, 0), StreamTag::Topology);
            write_topology_csv(build_topology(cfg, rng), std::filesystem::path(out_dir) / "topology.csv");
        }
        if (!quiet) {
            out << summary_text(result);
            for (const auto& p : manifest) out << "wrote " << p.string() << '\n';
        }
    } catch (const std::exception& e) {
        err << "output error: " << e.what() << '\n';
        return kExitOutput;
    }
    return kExitOk;
}

}  // namespace subnetsim
