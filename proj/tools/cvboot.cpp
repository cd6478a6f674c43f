// cvboot: command-line front end.
//
//   cvboot estimate --data d.csv --outcome y --learner ols --m 80
//   cvboot compare  --data d.csv --outcome y --learner lasso --lambda 0.1 --learner-b ols --m 60
//   cvboot roc      --data d.csv --outcome y --learner logistic --k 10 --reps 50 --b-boot 100
//   cvboot simulate --generator linear_lowdim --m 40,60,80 --sims 200
//   cvboot pilot    --data d.csv --outcome y --m 80 --budget 8000
//
// Flags may also come from a JSON job file (--job); keys are the flag names
// with dashes replaced by underscores, and the job file wins on conflict.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cvboot/cvboot.hpp"

namespace {

using cvboot::Json;

// Keys that do not change any number in the report.
const std::vector<std::string> kPresentationKeys = {"out", "format", "threads", "job"};

// Numeric flags that must be nonnegative integers.
const std::set<std::string> kCountKeys = {"m",    "b-boot", "b-cv", "b-cv-point", "l-reps",     "threads", "k",
                                          "reps", "k-adj",  "n",    "p",          "sims",       "truth-reps",
                                          "n-test", "budget"};

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(item);
    return out;
}

template <class T>
T get_or(const Json& cfg, const char* key, T fallback)
{
    if (!cfg.contains(key) || cfg[key].is_null())
        return fallback;
    try {
        return cfg[key].get<T>();
    } catch (const std::exception& e) {
        cvboot::fail(cvboot::ErrorCode::InvalidArgument, "config key '", key, "': ", e.what());
    }
}

std::string require_string(const Json& cfg, const char* key)
{
    auto v = get_or<std::string>(cfg, key, "");
    if (v.empty())
        cvboot::fail(cvboot::ErrorCode::InvalidArgument, "missing required option --", key);
    return v;
}

cvboot::LearnerSpec learner_from(const Json& cfg, const char* kind_key, const char* lambda_key)
{
    cvboot::LearnerSpec spec;
    spec.kind = cvboot::parse_learner_kind(get_or<std::string>(cfg, kind_key, "ols"));
    spec.lambda = get_or<double>(cfg, lambda_key, 0.0);
    if (cfg.contains("lambda_gamma"))
        spec.lambda_gamma = get_or<double>(cfg, "lambda_gamma", spec.lambda);
    if (cfg.contains("pi"))
        spec.pi = get_or<double>(cfg, "pi", 0.5);
    spec.standardize = get_or<bool>(cfg, "standardize", true);
    const auto separation = get_or<std::string>(cfg, "separation", "keep");
    if (separation == "reject")
        spec.separation = cvboot::SeparationPolicy::reject;
    else if (separation != "keep")
        cvboot::fail(cvboot::ErrorCode::InvalidArgument, "separation must be reject or keep, got ", separation);
    return spec;
}

cvboot::Metric default_metric(cvboot::LearnerKind k)
{
    if (cvboot::is_binary_learner(k))
        return cvboot::Metric::c_index;
    if (cvboot::is_itr(k))
        return cvboot::Metric::ate_positive;
    return cvboot::Metric::mape;
}

cvboot::MetricEvaluator evaluator_from(const Json& cfg, const cvboot::LearnerSpec& learner)
{
    cvboot::MetricEvaluator e;
    e.metric = cfg.contains("metric") ? cvboot::parse_metric(get_or<std::string>(cfg, "metric", ""))
                                      : default_metric(learner.kind);
    e.cutoff = get_or<double>(cfg, "cutoff", 0.0);
    const auto rule = get_or<std::string>(cfg, "cutoff_rule", "fixed");
    if (rule == "median")
        e.cutoff_rule = cvboot::CutoffRule::median;
    else if (rule != "fixed")
        cvboot::fail(cvboot::ErrorCode::InvalidArgument, "cutoff_rule must be fixed or median");
    return e;
}

std::uint64_t seed_from(const Json& cfg) { return get_or<std::uint64_t>(cfg, "seed", 1); }

cvboot::RunConfig run_from(const Json& cfg)
{
    cvboot::RunConfig run;
    run.m = get_or<cvboot::Index>(cfg, "m", 0);
    run.b_boot = get_or<cvboot::Index>(cfg, "b_boot", run.b_boot);
    run.b_cv = get_or<cvboot::Index>(cfg, "b_cv", run.b_cv);
    run.b_cv_point = get_or<cvboot::Index>(cfg, "b_cv_point", run.b_cv_point);
    run.alpha = get_or<double>(cfg, "alpha", run.alpha);
    run.calibrate = get_or<bool>(cfg, "calibrate", false);
    run.l_reps = get_or<cvboot::Index>(cfg, "l_reps", run.l_reps);
    run.stratify = get_or<bool>(cfg, "stratify", false);
    run.seed = seed_from(cfg);
    run.threads = get_or<unsigned>(cfg, "threads", 1);
    return run;
}

bool wants_binary(const cvboot::LearnerSpec& learner, const cvboot::MetricEvaluator& eval)
{
    return cvboot::is_binary_learner(learner.kind) || eval.metric == cvboot::Metric::c_index ||
           eval.metric == cvboot::Metric::c_index_strict;
}

cvboot::IngestResult load_data(const Json& cfg, bool binary)
{
    cvboot::ColumnSelection sel;
    sel.outcome = require_string(cfg, "outcome");
    if (cfg.contains("treatment"))
        sel.treatment = get_or<std::string>(cfg, "treatment", "");
    if (cfg.contains("features")) {
        const auto& f = cfg["features"];
        sel.features = f.is_array() ? f.get<std::vector<std::string>>() : split_list(f.get<std::string>());
    }
    if (cfg.contains("id"))
        sel.id = get_or<std::string>(cfg, "id", "");
    sel.kind = binary ? cvboot::OutcomeKind::binary : cvboot::OutcomeKind::continuous;
    return cvboot::ingest_csv(require_string(cfg, "data"), sel);
}

Json data_block(const cvboot::IngestResult& in)
{
    return Json{{"n", in.data.n()}, {"p", in.data.p()}, {"dropped_count", in.dropped_count},
                {"features", in.feature_names}};
}

struct Output {
    Json json;
    std::string csv;
};

Output run_estimate(const Json& cfg)
{
    const auto learner_spec = learner_from(cfg, "learner", "lambda");
    const auto eval = evaluator_from(cfg, learner_spec);
    const auto data = load_data(cfg, wants_binary(learner_spec, eval));
    const auto run = run_from(cfg);
    const auto res = cvboot::fast_bootstrap(data.data, cvboot::LinearLearner{learner_spec}, eval, run);
    Output out;
    out.json["report"] = cvboot::to_json(res.report);
    out.json["data"] = data_block(data);
    out.json["fits_used"] = res.report.fits_used;
    out.csv = cvboot::to_csv(res.report);
    return out;
}

Output run_compare(const Json& cfg)
{
    const auto a = learner_from(cfg, "learner", "lambda");
    const auto b = learner_from(cfg, "learner_b", "lambda_b");
    const auto eval = evaluator_from(cfg, a);
    const auto data = load_data(cfg, wants_binary(a, eval) || cvboot::is_binary_learner(b.kind));
    const auto run = run_from(cfg);
    const auto res =
        cvboot::compare_models(data.data, cvboot::LinearLearner{a}, cvboot::LinearLearner{b}, eval, run);
    Output out;
    out.json["report"] = cvboot::to_json(res.report);
    out.json["report"]["estimand"] = "difference (learner - learner_b)";
    out.json["data"] = data_block(data);
    out.json["fits_used"] = res.report.fits_used;
    out.csv = cvboot::to_csv(res.report);
    return out;
}

Output run_roc(const Json& cfg)
{
    const auto learner_spec = learner_from(cfg, "learner", "lambda");
    const auto data = load_data(cfg, true);
    cvboot::PrevalidationConfig pc;
    pc.k = get_or<cvboot::Index>(cfg, "k", pc.k);
    pc.reps = get_or<cvboot::Index>(cfg, "reps", pc.reps);
    pc.b_boot = get_or<cvboot::Index>(cfg, "b_boot", 0);
    pc.b_cv = get_or<cvboot::Index>(cfg, "b_cv", pc.b_cv);
    if (cfg.contains("k_adj"))
        pc.k_adj = get_or<cvboot::Index>(cfg, "k_adj", 0);
    pc.alpha = get_or<double>(cfg, "alpha", pc.alpha);
    pc.seed = seed_from(cfg);
    pc.threads = get_or<unsigned>(cfg, "threads", 1);
    const auto res = cvboot::kfold_prevalidate(data.data, cvboot::LinearLearner{learner_spec}, pc);
    Output out;
    out.json["roc"] = cvboot::to_json(res);
    out.json["data"] = data_block(data);
    out.json["fits_used"] = res.fits;
    out.csv = cvboot::to_csv(res);
    return out;
}

Output run_simulate(const Json& cfg)
{
    cvboot::GeneratorSpec gen;
    gen.kind = cvboot::parse_generator_kind(get_or<std::string>(cfg, "generator", "linear_lowdim"));
    gen.n = get_or<cvboot::Index>(cfg, "n", 0);
    gen.p = get_or<cvboot::Index>(cfg, "p", 0);
    const auto design = cvboot::design_of(gen.kind);

    // --write-data: emit one generated dataset and stop.
    if (cfg.contains("write_data")) {
        const auto path = require_string(cfg, "write_data");
        cvboot::Rng rng = cvboot::make_rng(seed_from(cfg), {cvboot::stream::simulation, 9});
        const auto d = cvboot::generate(gen, rng);
        std::ofstream f(path);
        if (!f)
            cvboot::fail(cvboot::ErrorCode::Io, "cannot write '", path, "'");
        cvboot::write_csv(f, d);
        Output out;
        out.json["written"] = path;
        out.json["n"] = d.n();
        out.json["p"] = d.p();
        out.json["fits_used"] = 0;
        out.csv = "written,n,p\n" + path + "," + std::to_string(d.n()) + "," + std::to_string(d.p()) + "\n";
        return out;
    }

    const char* default_learner = design == cvboot::Design::logistic ? "logistic"
                                  : design == cvboot::Design::itr    ? "itr_linear"
                                                                     : "ols";
    auto learner_spec = learner_from(cfg, "learner", "lambda");
    if (!cfg.contains("learner"))
        learner_spec.kind = cvboot::parse_learner_kind(default_learner);
    const auto eval = evaluator_from(cfg, learner_spec);
    const cvboot::LinearLearner learner{learner_spec};

    std::vector<cvboot::Index> m_grid;
    if (cfg.contains("m") && cfg["m"].is_array())
        m_grid = cfg["m"].get<std::vector<cvboot::Index>>();
    else if (cfg.contains("m") && cfg["m"].is_string())
        for (const auto& s : split_list(cfg["m"].get<std::string>()))
            m_grid.push_back(static_cast<cvboot::Index>(std::stoul(s)));
    else if (cfg.contains("m"))
        m_grid.push_back(get_or<cvboot::Index>(cfg, "m", 0));
    if (m_grid.empty())
        cvboot::fail(cvboot::ErrorCode::InvalidArgument, "simulate needs --m (comma-separated list allowed)");

    Json run_cfg = cfg;
    run_cfg.erase("m");
    auto run = run_from(run_cfg);
    cvboot::TruthConfig tc;
    tc.train_reps = get_or<cvboot::Index>(cfg, "truth_reps", 2000);
    tc.n_test = get_or<cvboot::Index>(cfg, "n_test", 50000);
    tc.seed = cvboot::derive_seed(run.seed, {cvboot::stream::simulation, 100});
    tc.threads = run.threads;
    std::vector<double> truths;
    for (auto m : m_grid)
        truths.push_back(cvboot::true_err_m(gen, learner, eval, m, tc));

    cvboot::CoverageConfig cc;
    cc.n_sims = get_or<cvboot::Index>(cfg, "sims", 200);
    cc.seed = run.seed;
    cc.threads = run.threads;
    run.m = m_grid.front();
    const auto rows = cvboot::coverage_experiment(gen, learner, eval, m_grid, truths, run, cc);

    Output out;
    Json table = Json::array();
    cvboot::Index fits = 0;
    for (const auto& r : rows) {
        table.push_back(cvboot::to_json(r));
        fits += r.sims * (run.b_boot * run.b_cv + run.b_cv_point);
    }
    out.json["generator"] = Json{{"kind", std::string(cvboot::to_string(gen.kind))},
                                 {"n", gen.sample_size()},
                                 {"p", gen.dim()}};
    out.json["coverage"] = table;
    out.json["fits_used"] = fits;
    out.csv = cvboot::to_csv(rows);
    return out;
}

Output run_pilot(const Json& cfg)
{
    const auto learner_spec = learner_from(cfg, "learner", "lambda");
    const auto eval = evaluator_from(cfg, learner_spec);
    const auto data = load_data(cfg, wants_binary(learner_spec, eval));
    auto pilot_cfg = run_from(cfg);
    if (!cfg.contains("b_boot"))
        pilot_cfg.b_boot = 20;
    if (!cfg.contains("b_cv"))
        pilot_cfg.b_cv = 20;
    const auto budget = get_or<cvboot::Index>(cfg, "budget", 8000);
    const auto res = cvboot::pilot_allocate(data.data, cvboot::LinearLearner{learner_spec}, eval, pilot_cfg, budget);
    Output out;
    out.json["allocation"] = Json{{"b_boot", res.allocation.b_boot},
                                  {"b_cv", res.allocation.b_cv},
                                  {"budget", budget},
                                  {"ratio_tau_sigma", res.pilot.sigma_bt_sq > 0
                                                          ? res.pilot.tau0_sq / res.pilot.sigma_bt_sq
                                                          : 0.0}};
    out.json["pilot"] = Json{{"sigma_bt_sq", res.pilot.sigma_bt_sq}, {"tau0_sq", res.pilot.tau0_sq}};
    out.json["data"] = data_block(data);
    out.json["fits_used"] = res.pilot_fits;
    std::ostringstream csv;
    csv << "b_boot,b_cv,budget,sigma_bt_sq,tau0_sq\n"
        << res.allocation.b_boot << ',' << res.allocation.b_cv << ',' << budget << ',' << res.pilot.sigma_bt_sq
        << ',' << res.pilot.tau0_sq << '\n';
    out.csv = csv.str();
    return out;
}

std::string utc_timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

int emit_error(const std::string& code, const std::string& message)
{
    Json err{{"error", Json{{"code", code}, {"message", message}}}};
    std::cerr << err.dump(2) << '\n';
    return 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Confidence intervals for cross-validated model performance"};
    app.require_subcommand(1, 1);

    Json flags; // only flags the user actually set
    std::string job_path;

    std::vector<std::unique_ptr<std::string>> storage;
    std::vector<std::pair<CLI::Option*, std::string>> string_opts;
    std::vector<std::pair<CLI::Option*, std::string>> number_opts;
    std::vector<std::pair<CLI::Option*, std::string>> bool_opts;
    std::vector<std::unique_ptr<bool>> bool_storage;

    auto add_common = [&](CLI::App* sub, const std::vector<std::pair<std::string, std::string>>& strings,
                          const std::vector<std::pair<std::string, std::string>>& numbers,
                          const std::vector<std::pair<std::string, std::string>>& bools) {
        sub->add_option("--job", job_path, "JSON job file; its keys override flags");
        for (const auto& [name, help] : strings) {
            storage.push_back(std::make_unique<std::string>());
            string_opts.emplace_back(sub->add_option("--" + name, *storage.back(), help), name);
        }
        for (const auto& [name, help] : numbers) {
            storage.push_back(std::make_unique<std::string>());
            number_opts.emplace_back(sub->add_option("--" + name, *storage.back(), help), name);
        }
        for (const auto& [name, help] : bools) {
            bool_storage.push_back(std::make_unique<bool>(false));
            bool_opts.emplace_back(sub->add_flag("--" + name, *bool_storage.back(), help), name);
        }
    };

    const std::vector<std::pair<std::string, std::string>> data_opts = {
        {"data", "input CSV with a header row"},
        {"outcome", "outcome column"},
        {"treatment", "treatment column (0/1), for itr learners"},
        {"features", "comma-separated feature columns (default: all others)"},
        {"id", "row identifier column"},
        {"learner", "ols | lasso | logistic | lasso_logistic | itr_linear | itr_lasso"},
        {"metric", "mape | cindex | cindex_strict | ate_pos | ate_nonpos"},
        {"cutoff-rule", "fixed | median (subgroup metrics)"},
        {"separation", "keep | reject (logistic fits that diverge; reject redraws the split)"},
        {"out", "output path (default stdout)"},
        {"format", "json | csv"},
    };
    const std::vector<std::pair<std::string, std::string>> run_opts = {
        {"lambda", "lasso penalty"},
        {"lambda-gamma", "itr_lasso main-effect penalty"},
        {"pi", "treated fraction used by itr learners"},
        {"cutoff", "subgroup score cutoff (default 0)"},
        {"m", "training size"},
        {"b-boot", "bootstraps"},
        {"b-cv", "splits per bootstrap"},
        {"b-cv-point", "splits for the point estimate"},
        {"alpha", "1 - confidence level"},
        {"l-reps", "calibration replicates"},
        {"seed", "master seed (default $CVBOOT_SEED or 1)"},
        {"threads", "worker threads (0: all cores)"},
    };
    const std::vector<std::pair<std::string, std::string>> run_bools = {
        {"calibrate", "calibrate the critical value by a second-level bootstrap"},
        {"stratify", "keep both outcome classes in every fold"},
        {"no-standardize", "penalise raw rather than standardised coefficients"},
    };

    auto* estimate = app.add_subcommand("estimate", "point estimate, bootstrap SE and intervals");
    add_common(estimate, data_opts, run_opts, run_bools);

    auto* compare = app.add_subcommand("compare", "paired difference of two learners");
    auto compare_strings = data_opts;
    compare_strings.push_back({"learner-b", "second learner"});
    auto compare_numbers = run_opts;
    compare_numbers.push_back({"lambda-b", "second learner's penalty"});
    add_common(compare, compare_strings, compare_numbers, run_bools);

    auto* roc = app.add_subcommand("roc", "K-fold pre-validated ROC curve with pointwise intervals");
    auto roc_numbers = run_opts;
    roc_numbers.push_back({"k", "folds"});
    roc_numbers.push_back({"reps", "K-fold partitions averaged"});
    roc_numbers.push_back({"k-adj", "folds inside bootstraps (default ceil(1.2 k))"});
    add_common(roc, data_opts, roc_numbers, run_bools);

    auto* simulate = app.add_subcommand("simulate", "coverage study on a synthetic design");
    auto sim_strings = std::vector<std::pair<std::string, std::string>>{
        {"generator", "linear_lowdim | linear_highdim | logistic_lowdim | logistic_highdim | itr_lowdim | itr_highdim"},
        {"learner", "learner (default follows the generator)"},
        {"metric", "metric (default follows the learner)"},
        {"m", "training sizes, comma-separated"},
        {"write-data", "write one generated dataset to this CSV path and exit"},
        {"separation", "keep | reject"},
        {"out", "output path (default stdout)"},
        {"format", "json | csv"},
    };
    auto sim_numbers = run_opts;
    sim_numbers.erase(std::remove_if(sim_numbers.begin(), sim_numbers.end(), [](auto& o) { return o.first == "m"; }),
                      sim_numbers.end());
    sim_numbers.push_back({"n", "sample size (default per design)"});
    sim_numbers.push_back({"p", "dimension (default per design)"});
    sim_numbers.push_back({"sims", "simulated datasets per training size"});
    sim_numbers.push_back({"truth-reps", "training replicates for Err_m"});
    sim_numbers.push_back({"n-test", "test rows for Err_m when no closed form exists"});
    add_common(simulate, sim_strings, sim_numbers, run_bools);

    auto* pilot = app.add_subcommand("pilot", "pilot run and budget allocation between bootstraps and splits");
    auto pilot_numbers = run_opts;
    pilot_numbers.push_back({"budget", "total model fits available"});
    add_common(pilot, data_opts, pilot_numbers, run_bools);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e);
        return emit_error("InvalidArgument", e.what());
    }

    const auto* sub = app.get_subcommands().front();
    const std::string command = sub->get_name();
    try {
        auto key_of = [](std::string name) {
            std::replace(name.begin(), name.end(), '-', '_');
            return name;
        };
        for (const auto& [opt, name] : string_opts)
            if (opt->count())
                flags[key_of(name)] = opt->as<std::string>();
        for (const auto& [opt, name] : number_opts)
            if (opt->count()) {
                const auto raw = opt->as<std::string>();
                const auto v = cvboot::detail::parse_number(raw);
                if (!v)
                    cvboot::fail(cvboot::ErrorCode::InvalidArgument, "--", name, " expects a number, got '", raw, "'");
                if (name == "seed")
                    flags["seed"] = static_cast<std::uint64_t>(std::stoull(raw));
                else if (kCountKeys.count(name)) {
                    if (!(*v >= 0) || *v != std::floor(*v))
                        cvboot::fail(cvboot::ErrorCode::InvalidArgument, "--", name, " expects a count, got '", raw,
                                     "'");
                    flags[key_of(name)] = static_cast<std::uint64_t>(*v);
                }
                else
                    flags[key_of(name)] = *v;
            }
        for (const auto& [opt, name] : bool_opts)
            if (opt->count()) {
                if (name == "no-standardize")
                    flags["standardize"] = false;
                else
                    flags[key_of(name)] = true;
            }
        if (!flags.contains("seed"))
            if (const char* env = std::getenv("CVBOOT_SEED"))
                flags["seed"] = static_cast<std::uint64_t>(std::stoull(env));

        Json cfg = flags;
        if (!job_path.empty()) {
            std::ifstream jf(job_path);
            if (!jf)
                cvboot::fail(cvboot::ErrorCode::Io, "cannot open job file '", job_path, "'");
            Json job;
            try {
                job = Json::parse(jf);
            } catch (const std::exception& e) {
                cvboot::fail(cvboot::ErrorCode::InvalidArgument, "job file is not valid JSON: ", e.what());
            }
            if (job.contains("command") && job["command"] != command)
                cvboot::fail(cvboot::ErrorCode::InvalidArgument, "job file is for '",
                             job["command"].get<std::string>(), "', not '", command, "'");
            for (auto it = job.begin(); it != job.end(); ++it)
                cfg[key_of(it.key())] = it.value();
        }
        cfg["command"] = command;
        if (!cfg.contains("seed"))
            cfg["seed"] = std::uint64_t{1};

        Output out;
        if (command == "estimate")
            out = run_estimate(cfg);
        else if (command == "compare")
            out = run_compare(cfg);
        else if (command == "roc")
            out = run_roc(cfg);
        else if (command == "simulate")
            out = run_simulate(cfg);
        else
            out = run_pilot(cfg);

        Json hashed = cfg;
        for (const auto& k : kPresentationKeys)
            hashed.erase(k);
        Json report;
        report["command"] = command;
        report["config"] = cfg;
        for (auto it = out.json.begin(); it != out.json.end(); ++it)
            if (it.key() != "fits_used")
                report[it.key()] = it.value();
        report["reproducibility"] = Json{{"seed", cfg["seed"]},
                                         {"config_hash", cvboot::hex64(cvboot::fnv1a(hashed.dump()))},
                                         {"fits_used", out.json.value("fits_used", Json(0))}};
        report["generated_at"] = utc_timestamp();

        const auto format = get_or<std::string>(cfg, "format", "json");
        std::string text;
        if (format == "json")
            text = report.dump(2) + "\n";
        else if (format == "csv")
            text = out.csv;
        else
            cvboot::fail(cvboot::ErrorCode::InvalidArgument, "format must be json or csv");

        const auto path = get_or<std::string>(cfg, "out", "");
        if (path.empty()) {
            std::cout << text;
        } else {
            std::ofstream f(path, std::ios::binary);
            if (!f || !(f << text))
                cvboot::fail(cvboot::ErrorCode::Io, "cannot write '", path, "'");
        }
        return 0;
    } catch (const cvboot::Error& e) {
        return emit_error(std::string(cvboot::to_string(e.code())), e.what());
    } catch (const std::exception& e) {
        return emit_error("Internal", e.what());
    }
}
