// SPDX-License-Identifier: Apache-2.0
//
// oobbeam - out-of-band aided beam selection for analog mmWave MIMO-OFDM
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "oobbeam/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "oobbeam/io.hpp"
#include "oobbeam/linalg.hpp"
#include "oobbeam/oob.hpp"
#include "oobbeam/render.hpp"
#include "oobbeam/select.hpp"

namespace oobbeam
{

namespace
{

namespace purpose
{
constexpr std::uint64_t clusters = 1;
constexpr std::uint64_t rays_sub6 = 2;
constexpr std::uint64_t rays_mmwave = 3;
constexpr std::uint64_t probe = 4;
constexpr std::uint64_t noise_sub6 = 5;
constexpr std::uint64_t noise_exhaustive = 6;
constexpr std::uint64_t codebook_random = 7;
constexpr std::uint64_t codebook_structured = 8;
constexpr std::uint64_t noise_meas_random = 9;
constexpr std::uint64_t noise_meas_structured = 10;
} // namespace purpose

struct MethodSpec
{
    std::string name;
    bool exhaustive = false;
    bool structured = false;
    bool weighted = false;
    bool mmv = false;
};

MethodSpec parse_method(const std::string& name)
{
    MethodSpec m;
    m.name = name;
    if (name == "exhaustive")
    {
        m.exhaustive = true;
        return m;
    }
    std::string tail = name;
    if (tail.rfind("structured-", 0) == 0)
    {
        m.structured = true;
        tail = tail.substr(11);
    }
    if (tail.rfind("lw-", 0) == 0)
    {
        m.weighted = true;
        tail = tail.substr(3);
    }
    if (tail == "somp")
        m.mmv = true;
    else if (tail != "omp")
        throw std::invalid_argument("unknown method: " + name);
    return m;
}

// Best-first flat indices of the n largest scores (ties to the lowest index).
std::vector<Eigen::Index> top_indices(const Eigen::VectorXd& scores, Eigen::Index n)
{
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(scores.size()));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (scores[a] != scores[b])
            return scores[a] > scores[b];
        return a < b;
    });
    idx.resize(static_cast<std::size_t>(std::min<Eigen::Index>(n, scores.size())));
    return idx;
}

struct Context
{
    ExperimentConfig cfg;
    std::vector<MethodSpec> methods;
    double p_t = 0.0;
    double sigma2_mm = 0.0;
    double sigma2_s6 = 0.0;
    double sub6_snr_db = 0.0;
    double rho_mm = 0.0;
    double rho_s6 = 0.0;
    double snr_scale = 0.0; // P_t / (K sigma2)
    Codebook a_rx_mm, a_tx_mm, a_rx_s6, a_tx_s6;
    Eigen::MatrixXcd training;
    Eigen::MatrixXcd dft_lk; // L x K
    RaisedCosine pulse_mm, pulse_s6;
    Eigen::Index max_sp = 1;

    const BandSpec& mm() const { return cfg.mmwave; }
    const BandSpec& s6() const { return cfg.sub6; }
};

Context make_context(const ExperimentConfig& cfg)
{
    validate(cfg);
    Context ctx;
    ctx.cfg = cfg;
    for (const std::string& name : cfg.methods)
        ctx.methods.push_back(parse_method(name));

    ctx.p_t = std::pow(10.0, (cfg.tx_power_dbm - 30.0) / 10.0);
    ctx.sigma2_mm = calibrate_noise(cfg.mmwave_anchor.distance_m, cfg.mmwave_anchor.snr_db,
                                    cfg.mmwave.fc, cfg.mmwave.pathloss_exponent, ctx.p_t,
                                    cfg.mmwave.n_subcarriers);
    const double mm_snr_at_s6_anchor =
        cfg.mmwave_anchor.snr_db + 10.0 * cfg.mmwave.pathloss_exponent *
                                       std::log10(cfg.mmwave_anchor.distance_m /
                                                  cfg.sub6_anchor_distance_m);
    ctx.sub6_snr_db =
        cfg.sub6_snr_db ? *cfg.sub6_snr_db : mm_snr_at_s6_anchor + cfg.sub6_snr_offset_db;
    ctx.sigma2_s6 = ctx.p_t /
                    pathloss_linear(cfg.sub6_anchor_distance_m, cfg.sub6.fc,
                                    cfg.sub6.pathloss_exponent) /
                    std::pow(10.0, ctx.sub6_snr_db / 10.0);

    ctx.rho_mm = pathloss_linear(cfg.distance_m, cfg.mmwave.fc, cfg.mmwave.pathloss_exponent);
    ctx.rho_s6 = pathloss_linear(cfg.distance_m, cfg.sub6.fc, cfg.sub6.pathloss_exponent);
    ctx.snr_scale = ctx.p_t / (static_cast<double>(cfg.mmwave.n_subcarriers) * ctx.sigma2_mm);

    ctx.a_rx_mm = dft_codebook(cfg.mmwave.rx_ula());
    ctx.a_tx_mm = dft_codebook(cfg.mmwave.tx_ula());
    ctx.a_rx_s6 = dft_codebook(cfg.sub6.rx_ula());
    ctx.a_tx_s6 = dft_codebook(cfg.sub6.tx_ula());

    const Eigen::Index n_tr =
        cfg.sub6_n_training > 0 ? cfg.sub6_n_training : cfg.sub6.m_tx;
    ctx.training = default_training(cfg.sub6.m_tx, n_tr, ctx.p_t);

    ctx.pulse_mm = RaisedCosine{1.0 / cfg.mmwave.bandwidth, cfg.pulse_rolloff};
    ctx.pulse_s6 = RaisedCosine{1.0 / cfg.sub6.bandwidth, cfg.pulse_rolloff};

    const Eigen::Index n_taps = cfg.mmwave.n_taps;
    const Eigen::Index n_fft = cfg.mmwave.n_subcarriers;
    ctx.dft_lk.resize(n_taps, n_fft);
    for (Eigen::Index k = 0; k < n_fft; ++k)
        for (Eigen::Index l = 0; l < n_taps; ++l)
            ctx.dft_lk(l, k) = std::polar(
                1.0, -2.0 * pi * static_cast<double>(k * l) / static_cast<double>(n_fft));

    ctx.max_sp = *std::max_element(cfg.success_set_sizes.begin(), cfg.success_set_sizes.end());
    return ctx;
}

// Spectral efficiency per subcarrier for one DFT beam pair, evaluated from
// the tap-domain channel.
Eigen::VectorXd pair_se(const Context& ctx, const TapChannel& taps, const BeamPair& pair)
{
    const Eigen::VectorXcd w =
        kron(ctx.a_tx_mm.matrix.col(pair.tx).conjugate(), ctx.a_rx_mm.matrix.col(pair.rx));
    const Eigen::RowVectorXcd proj = w.adjoint() * taps.flat; // 1 x L
    const Eigen::RowVectorXcd gains = proj * ctx.dft_lk;      // 1 x K
    Eigen::VectorXd se(gains.cols());
    for (Eigen::Index k = 0; k < gains.cols(); ++k)
        se[k] = std::log2(1.0 + ctx.snr_scale * std::norm(gains[k]));
    return se;
}

MultiBandRealization realize_channels(const Context& ctx, int trial)
{
    const ExperimentConfig& cfg = ctx.cfg;
    const std::uint64_t e = static_cast<std::uint64_t>(trial);

    MultiBandRealization mb;
    Rng rng_cl = substream(cfg.seed, {purpose::clusters, e});
    if (cfg.cluster_override)
    {
        const ClusterOverride& ov = *cfg.cluster_override;
        mb.sub6.clusters = {{rng_cl.uniform(0.0, cfg.sub6.tau_max), ov.sub6_aoa, ov.sub6_aod}};
        mb.mmwave.clusters = {
            {rng_cl.uniform(0.0, cfg.mmwave.tau_max), ov.mmwave_aoa, ov.mmwave_aod}};
    }
    else
    {
        GeneratedClusters gen = generate_clusters(cfg.sub6, cfg.mmwave, cfg.domain, rng_cl);
        mb.sub6.clusters = std::move(gen.band_a);
        mb.mmwave.clusters = std::move(gen.band_b);
        mb.shared_cluster_indices = std::move(gen.shared_indices);
        mb.n_clamped = gen.n_clamped;
    }
    mb.sub6.band = cfg.sub6;
    mb.mmwave.band = cfg.mmwave;
    Rng rng_rs = substream(cfg.seed, {purpose::rays_sub6, e});
    Rng rng_rm = substream(cfg.seed, {purpose::rays_mmwave, e});
    mb.sub6.rays = generate_rays(mb.sub6.clusters, cfg.sub6, rng_rs);
    mb.mmwave.rays = generate_rays(mb.mmwave.clusters, cfg.mmwave, rng_rm);
    mb.sub6.pathloss = ctx.rho_s6;
    mb.mmwave.pathloss = ctx.rho_mm;
    return mb;
}

// Sub-6 extraction products needed by the weighted and structured methods.
struct OobProducts
{
    Eigen::Index i_star = 0; // dominant RX bin
    Eigen::Index j_star = 0; // dominant TX bin
    PriorVector prior;
    SpatialSpectrum spectrum;
    Eigen::ArrayXXd scaled;
};

OobProducts extract_oob(const Context& ctx, const Eigen::MatrixXcd& h_sub6, int trial)
{
    Rng rng = substream(ctx.cfg.seed, {purpose::noise_sub6, static_cast<std::uint64_t>(trial)});
    const Eigen::MatrixXcd h_hat =
        estimate_sub6_channel(h_sub6, ctx.training, ctx.sigma2_s6, rng);
    OobProducts out;
    out.spectrum = spatial_spectrum(h_hat, ctx.a_rx_s6.matrix, ctx.a_tx_s6.matrix);
    std::tie(out.i_star, out.j_star) = dominant_indices(out.spectrum);
    out.scaled = scale_bicubic(out.spectrum.mags, ctx.mm().m_rx, ctx.mm().m_tx);
    out.prior = prior_vector(out.scaled, ctx.cfg.j_p);
    return out;
}

struct TrialOut
{
    std::vector<Eigen::Index> truth_ranked;
    // aligned with the record keys built in run_experiment
    std::vector<TrialRecord> records;
};

struct RecordKey
{
    std::size_t method_index;
    int cell; // -1 for exhaustive
    Eigen::Index n_meas;
};

TrialOut run_trial(const Context& ctx, const std::vector<RecordKey>& keys, int trial)
{
    const ExperimentConfig& cfg = ctx.cfg;
    const std::uint64_t e = static_cast<std::uint64_t>(trial);
    const Eigen::Index n_fft = cfg.mmwave.n_subcarriers;

    const MultiBandRealization mb = realize_channels(ctx, trial);
    const TapChannel taps = render_taps(mb.mmwave, ctx.pulse_mm, 1.0 / cfg.mmwave.bandwidth);
    const Eigen::MatrixXcd h_sub6 = render_narrowband_sub6(mb.sub6, ctx.pulse_s6);

    std::vector<Eigen::Index> probed;
    if (cfg.probe == ProbeMode::single_k)
    {
        Rng rng_probe = substream(cfg.seed, {purpose::probe, e});
        probed = {static_cast<Eigen::Index>(rng_probe.uniform_int(0, n_fft - 1))};
    }
    else
    {
        probed.resize(static_cast<std::size_t>(n_fft));
        std::iota(probed.begin(), probed.end(), Eigen::Index{0});
    }
    const FreqChannel freq = render_freq_at(taps, n_fft, probed);

    const OobProducts oob = extract_oob(ctx, h_sub6, trial);
    const WeightingConfig wcfg{cfg.j_w, cfg.epsilon_p};
    const NoiseModel noise{ctx.sigma2_mm};

    Rng rng_unused(0);
    const Eigen::VectorXd truth_scores = exhaustive_scores(
        freq, ctx.a_rx_mm, ctx.a_tx_mm, noise, probed, ctx.p_t, rng_unused, true);

    TrialOut out;
    out.truth_ranked = top_indices(truth_scores, ctx.max_sp);

    std::map<Eigen::Index, Eigen::VectorXd> se_cache;
    const auto se_of = [&](const BeamPair& pair) -> const Eigen::VectorXd& {
        const Eigen::Index flat = pair.flat(cfg.mmwave.m_rx);
        auto it = se_cache.find(flat);
        if (it == se_cache.end())
            it = se_cache.emplace(flat, pair_se(ctx, taps, pair)).first;
        return it->second;
    };

    // measurement sets are shared between the plain and weighted variants of
    // a cell, so those methods see identical training
    std::map<std::pair<int, bool>, MeasurementSet> measured;
    const auto measurement_for = [&](int cell, bool structured) -> const MeasurementSet& {
        const auto key = std::make_pair(cell, structured);
        auto it = measured.find(key);
        if (it != measured.end())
            return it->second;
        const auto [n_rx, n_tx] = cfg.n_meas_grid[static_cast<std::size_t>(cell)];
        const std::uint64_t c = static_cast<std::uint64_t>(cell);
        Codebook f, q;
        if (structured)
        {
            Rng rng_cb = substream(cfg.seed, {purpose::codebook_structured, e, c});
            f = structured_codebook(cfg.mmwave.tx_ula(), oob.j_star, cfg.sub6.m_tx, n_tx,
                                    cfg.super_codebook_size, ctx.a_tx_mm.phase_bits, rng_cb);
            q = structured_codebook(cfg.mmwave.rx_ula(), oob.i_star, cfg.sub6.m_rx, n_rx,
                                    cfg.super_codebook_size, ctx.a_rx_mm.phase_bits, rng_cb);
        }
        else
        {
            Rng rng_cb = substream(cfg.seed, {purpose::codebook_random, e, c});
            f = random_codebook(cfg.mmwave.tx_ula(), n_tx, ctx.a_tx_mm.phase_bits, rng_cb);
            q = random_codebook(cfg.mmwave.rx_ula(), n_rx, ctx.a_rx_mm.phase_bits, rng_cb);
        }
        Rng rng_noise = substream(
            cfg.seed,
            {structured ? purpose::noise_meas_structured : purpose::noise_meas_random, e, c});
        it = measured
                 .emplace(key, measure(freq, f, q, ctx.a_tx_mm, ctx.a_rx_mm, noise, probed,
                                       ctx.p_t, rng_noise))
                 .first;
        return it->second;
    };

    out.records.resize(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i)
    {
        const RecordKey& key = keys[i];
        const MethodSpec& method = ctx.methods[key.method_index];
        BeamPair pair;
        if (method.exhaustive)
        {
            Rng rng_noise = substream(cfg.seed, {purpose::noise_exhaustive, e});
            pair = exhaustive_search(freq, ctx.a_rx_mm, ctx.a_tx_mm, noise, probed, ctx.p_t,
                                     rng_noise, false);
        }
        else
        {
            const MeasurementSet& ms = measurement_for(key.cell, method.structured);
            SelectionResult sel;
            if (method.mmv)
                sel = method.weighted ? lw_somp_select(ms, oob.prior, wcfg) : somp_select(ms);
            else
                sel = method.weighted ? lw_omp_select(ms, probed[0], oob.prior, wcfg)
                                      : omp_select(ms, probed[0]);
            pair = sel.pair;
        }
        TrialRecord rec;
        rec.trial = trial;
        rec.method = method.name;
        rec.pair = pair;
        rec.se_per_k = se_of(pair);
        rec.n_meas = key.n_meas;
        out.records[i] = std::move(rec);
    }
    return out;
}

void parallel_trials(const Context& ctx, const std::vector<RecordKey>& keys,
                     std::vector<TrialOut>& outs)
{
    const int n_trials = ctx.cfg.trials;
    unsigned n_threads = ctx.cfg.threads > 0 ? static_cast<unsigned>(ctx.cfg.threads)
                                             : std::thread::hardware_concurrency();
    if (n_threads == 0)
        n_threads = 1;
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(n_trials));

    if (n_threads <= 1)
    {
        for (int t = 0; t < n_trials; ++t)
            outs[static_cast<std::size_t>(t)] = run_trial(ctx, keys, t);
        return;
    }

    std::atomic<int> next{0};
    std::mutex err_mutex;
    std::exception_ptr error;
    const auto worker = [&]() {
        try
        {
            for (int t = next.fetch_add(1); t < n_trials; t = next.fetch_add(1))
                outs[static_cast<std::size_t>(t)] = run_trial(ctx, keys, t);
        }
        catch (...)
        {
            const std::lock_guard<std::mutex> lock(err_mutex);
            if (!error)
                error = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n_threads; ++i)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

} // namespace

double effective_rate(const std::vector<TrialRecord>& records, double t_c, Eigen::Index n_meas)
{
    if (records.empty())
        return 0.0;
    const double eta = training_efficiency(t_c, n_meas);
    double acc = 0.0;
    double count = 0.0;
    for (const TrialRecord& rec : records)
    {
        acc += rec.se_per_k.sum();
        count += static_cast<double>(rec.se_per_k.size());
    }
    return eta * acc / count;
}

double success_percentage(const std::vector<TrialRecord>& records,
                          const std::vector<std::vector<Eigen::Index>>& truth_ranked, int n_best,
                          Eigen::Index m_rx)
{
    if (records.empty())
        return 0.0;
    int hits = 0;
    for (const TrialRecord& rec : records)
    {
        const auto& ranked = truth_ranked.at(static_cast<std::size_t>(rec.trial));
        const auto n = std::min<std::size_t>(static_cast<std::size_t>(n_best), ranked.size());
        const Eigen::Index flat = rec.pair.flat(m_rx);
        for (std::size_t i = 0; i < n; ++i)
            if (ranked[i] == flat)
            {
                ++hits;
                break;
            }
    }
    return 100.0 * static_cast<double>(hits) / static_cast<double>(records.size());
}

ExperimentResult run_experiment(const ExperimentConfig& cfg)
{
    const Context ctx = make_context(cfg);

    // one record stream per method, and per measurement cell for the
    // compressed methods
    std::vector<RecordKey> keys;
    for (std::size_t m = 0; m < ctx.methods.size(); ++m)
    {
        if (ctx.methods[m].exhaustive)
            keys.push_back({m, -1, cfg.mmwave.m_rx * cfg.mmwave.m_tx});
        else
            for (std::size_t c = 0; c < cfg.n_meas_grid.size(); ++c)
                keys.push_back({m, static_cast<int>(c),
                                static_cast<Eigen::Index>(cfg.n_meas_grid[c].first) *
                                    cfg.n_meas_grid[c].second});
    }

    std::vector<TrialOut> outs(static_cast<std::size_t>(cfg.trials));
    parallel_trials(ctx, keys, outs);

    ExperimentResult result;
    result.sigma2_mmwave = ctx.sigma2_mm;
    result.sigma2_sub6 = ctx.sigma2_s6;
    result.sub6_snr_db = ctx.sub6_snr_db;
    result.truth_ranked.reserve(outs.size());
    for (const TrialOut& o : outs)
        result.truth_ranked.push_back(o.truth_ranked);

    result.record_keys.reserve(keys.size());
    result.records.resize(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i)
    {
        result.record_keys.emplace_back(ctx.methods[keys[i].method_index].name, keys[i].n_meas);
        result.records[i].reserve(outs.size());
        for (TrialOut& o : outs)
            result.records[i].push_back(std::move(o.records[i]));
    }

    MetricTable& table = result.table;
    table.sp_sizes = cfg.success_set_sizes;
    table.config_hash = config_hash(cfg);
    table.seed = cfg.seed;
    for (std::size_t i = 0; i < keys.size(); ++i)
    {
        std::vector<double> sp;
        sp.reserve(cfg.success_set_sizes.size());
        for (int n : cfg.success_set_sizes)
            sp.push_back(
                success_percentage(result.records[i], result.truth_ranked, n, cfg.mmwave.m_rx));
        for (double t_c : cfg.coherence_blocks)
        {
            MetricRow row;
            row.method = result.record_keys[i].first;
            row.n_meas = keys[i].n_meas;
            row.t_c = t_c;
            row.r_eff = effective_rate(result.records[i], t_c, keys[i].n_meas);
            row.sp = sp;
            row.trials = cfg.trials;
            table.rows.push_back(std::move(row));
        }
    }
    return result;
}

std::string metric_table_csv(const MetricTable& table)
{
    std::string out = "method,n_meas,t_c";
    out += ",r_eff";
    for (int n : table.sp_sizes)
        out += ",sp_b" + std::to_string(n);
    out += ",e,config_hash,seed\n";
    for (const MetricRow& row : table.rows)
    {
        out += row.method;
        out += ',' + std::to_string(row.n_meas);
        out += ',' + (std::isinf(row.t_c) ? std::string("inf") : format_double(row.t_c));
        out += ',' + format_double(row.r_eff);
        for (double sp : row.sp)
            out += ',' + format_double(sp);
        out += ',' + std::to_string(row.trials);
        out += ',' + table.config_hash;
        out += ',' + std::to_string(table.seed);
        out += '\n';
    }
    return out;
}

nlohmann::json result_to_json(const ExperimentResult& result, const ExperimentConfig& cfg)
{
    nlohmann::json j;
    j["config"] = config_to_json(cfg);
    j["config_hash"] = result.table.config_hash;
    j["seed"] = result.table.seed;
    j["noise"] = {{"sigma2_mmwave", result.sigma2_mmwave},
                  {"sigma2_sub6", result.sigma2_sub6},
                  {"sub6_snr_db_at_anchor", result.sub6_snr_db}};
    nlohmann::json rows = nlohmann::json::array();
    for (const MetricRow& row : result.table.rows)
    {
        nlohmann::json r = {{"method", row.method},
                            {"n_meas", row.n_meas},
                            {"t_c", std::isinf(row.t_c) ? 0.0 : row.t_c},
                            {"r_eff", row.r_eff},
                            {"e", row.trials}};
        for (std::size_t i = 0; i < row.sp.size(); ++i)
            r["sp_b" + std::to_string(result.table.sp_sizes[i])] = row.sp[i];
        rows.push_back(std::move(r));
    }
    j["table"] = rows;
    if (cfg.per_trial_records)
    {
        nlohmann::json trials = nlohmann::json::array();
        for (std::size_t i = 0; i < result.records.size(); ++i)
            for (const TrialRecord& rec : result.records[i])
            {
                nlohmann::json t = {{"trial", rec.trial},
                                    {"method", rec.method},
                                    {"n_meas", rec.n_meas},
                                    {"rx", rec.pair.rx},
                                    {"tx", rec.pair.tx},
                                    {"flat", rec.pair.flat(cfg.mmwave.m_rx)}};
                nlohmann::json se = nlohmann::json::array();
                for (Eigen::Index k = 0; k < rec.se_per_k.size(); ++k)
                    se.push_back(rec.se_per_k[k]);
                t["se_per_k"] = std::move(se);
                trials.push_back(std::move(t));
            }
        j["trials"] = std::move(trials);
    }
    return j;
}

void emit_results(const ExperimentResult& result, const ExperimentConfig& cfg)
{
    if (!cfg.out_csv.empty())
        write_text_file(cfg.out_csv, metric_table_csv(result.table));
    if (!cfg.out_json.empty())
        write_text_file(cfg.out_json, result_to_json(result, cfg).dump(2) + "\n");
}

} // namespace oobbeam
