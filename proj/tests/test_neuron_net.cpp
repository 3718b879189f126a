#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "neuropend/neuron_net.hpp"
#include "neuropend/prc.hpp"
#include "neuropend/simulator.hpp"

using namespace neuropend;

TEST_CASE("synapse current") {
    CHECK(synapse_current(1.0, -1.0) == doctest::Approx(0.5));
    CHECK(synapse_current(-2.0, 50.0) == doctest::Approx(-2.0));
    CHECK(std::abs(synapse_current(1.0, 0.0) - 0.880797) < 1e-6);
}

TEST_CASE("neuron rhs") {
    NeuronParams p;
    SUBCASE("offset terms cancel at rest with equal gains") {
        p.g_s_minus = p.g_us_plus = 1.7;
        const auto d = neuron_rhs({0.0, 0.0, 0.0}, p, 0.0, -1.0);
        CHECK(d.dv == doctest::Approx(-1.0 / p.tau_f));
    }
    SUBCASE("filters") {
        const auto d = neuron_rhs({1.0, 0.0, 0.0}, p, 0.0, -1.0);
        CHECK(d.dv_s == doctest::Approx(1.0 / p.tau_s));
        CHECK(d.dv_us == doctest::Approx(1.0 / p.tau_us));
    }
    SUBCASE("full evaluation against a 30-digit reference") {
        const auto d = neuron_rhs({0.2, -0.5, -0.8}, p, 0.0, -1.0);
        CHECK(d.dv == doctest::Approx(7.389128855003166).epsilon(1e-12));
        CHECK(d.dv_s == doctest::Approx(0.958904109589041).epsilon(1e-12));
        CHECK(d.dv_us == doctest::Approx(0.273972602739726).epsilon(1e-12));
    }
}

TEST_CASE("build_network topology") {
    const NeuronParams p;
    const auto in = build_network(Configuration::InPhase, p, 0.5, 0.3);
    const auto anti = build_network(Configuration::AntiPhase, p, 0.5, 0.3);
    REQUIRE(in.synapses.size() == 8);
    REQUIRE(anti.synapses.size() == 8);
    CHECK(std::count_if(in.synapses.begin(), in.synapses.end(), [](auto& s) { return s.g_syn < 0; }) == 4);
    CHECK(std::count_if(in.synapses.begin(), in.synapses.end(), [](auto& s) { return s.g_syn > 0; }) == 4);
    CHECK(std::all_of(anti.synapses.begin(), anti.synapses.end(), [](auto& s) { return s.g_syn < 0; }));

    auto intra = [](const NetworkSpec& n) {
        std::vector<std::tuple<std::size_t, std::size_t, double>> out;
        for (const auto& s : n.synapses) {
            if (index_of(s.pre) / 2 == index_of(s.post) / 2) out.emplace_back(index_of(s.pre), index_of(s.post), s.g_syn);
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    CHECK(intra(in) == intra(anti));
    CHECK(intra(in).size() == 4);
    for (const auto& [pre, post, g] : intra(in)) CHECK(g == -0.5);

    CHECK_THROWS(build_network(Configuration::InPhase, p, 0.0, 0.3));
    CHECK_NOTHROW(in.validate());
}

TEST_CASE("switch_configuration flips only the cross synapses") {
    auto n = build_network(Configuration::AntiPhase, NeuronParams{}, 0.5, 0.3);
    switch_configuration(n, Configuration::InPhase);
    const auto expected = build_network(Configuration::InPhase, NeuronParams{}, 0.5, 0.3);
    REQUIRE(n.synapses.size() == expected.synapses.size());
    for (std::size_t i = 0; i < n.synapses.size(); ++i) CHECK(n.synapses[i].g_syn == expected.synapses[i].g_syn);
    CHECK(n.configuration == Configuration::InPhase);
}

TEST_CASE("network rhs") {
    const NeuronParams p;
    NetworkState s{{{0.2, -0.5, -0.8}, {-0.7, 0.1, -0.2}, {0.9, 0.3, 0.0}, {-1.2, -0.9, -0.6}}};
    const CurrentVector i_app{-1.0, -0.8, -1.0, -1.1};

    SUBCASE("zero gains decouple") {
        NetworkSpec spec = build_network(Configuration::AntiPhase, p, 0.5, 0.3);
        for (auto& syn : spec.synapses) syn.g_syn = 0.0;
        const auto d = network_rhs(s, spec, i_app);
        for (std::size_t k = 0; k < 4; ++k) {
            const auto solo = neuron_rhs(s[k], p, 0.0, i_app[k]);
            CHECK(d[k].dv == solo.dv);
            CHECK(d[k].dv_s == solo.dv_s);
            CHECK(d[k].dv_us == solo.dv_us);
        }
    }
    SUBCASE("single synapse") {
        NetworkSpec spec;
        spec.params = p;
        spec.synapses = {{NeuronId::B2, NeuronId::A1, -0.7}};
        const auto syn = synaptic_input(s, spec.synapses);
        CHECK(syn[0] == doctest::Approx(synapse_current(-0.7, s[3].v_s)));
        CHECK(syn[1] == 0.0);
        CHECK(syn[2] == 0.0);
        CHECK(syn[3] == 0.0);
    }
    SUBCASE("mirrored network is permutation-equal") {
        for (auto c : {Configuration::InPhase, Configuration::AntiPhase}) {
            const auto spec = build_network(c, p, 0.5, 0.3);
            const NetworkState swapped{s[2], s[3], s[0], s[1]};
            const CurrentVector i_swapped{i_app[2], i_app[3], i_app[0], i_app[1]};
            const auto d = network_rhs(s, spec, i_app);
            const auto e = network_rhs(swapped, spec, i_swapped);
            for (std::size_t k = 0; k < 4; ++k) {
                CHECK(d[k].dv == doctest::Approx(e[(k + 2) % 4].dv));
                CHECK(d[k].dv_s == doctest::Approx(e[(k + 2) % 4].dv_s));
            }
        }
    }
}

TEST_CASE("kick_start schedule") {
    AppliedCurrentSchedule base(-1.0);
    const auto none = kick_start(base, NeuronId::A1, 0.0, 0.3);
    for (double t : {0.0, 0.1, 0.5}) {
        for (double i : none.at(t)) CHECK(i == -1.0);
    }
    const auto kicked = kick_start(base, NeuronId::B1, 2.0, 0.3, 1.0);
    CHECK(kicked.at(0.99)[1] == -1.0);
    CHECK(kicked.at(1.0)[1] == 1.0);
    CHECK(kicked.at(1.29)[1] == 1.0);
    CHECK(kicked.at(1.0)[0] == -1.0);
    for (double i : kicked.at(1.3)) CHECK(i == -1.0);
}

TEST_CASE("detect_bursts") {
    std::vector<double> t, v;
    for (int i = 0; i <= 1000; ++i) t.push_back(i * 0.01);
    SUBCASE("constant below threshold") {
        v.assign(t.size(), -0.5);
        CHECK(detect_bursts(t, v, 0.0).empty());
    }
    SUBCASE("square wave") {
        // High on [1,2), [3,4), ...
        for (double x : t) v.push_back(static_cast<int>(std::floor(x)) % 2 == 1 ? 1.0 : -1.0);
        const auto b = detect_bursts(t, v, 0.0);
        REQUIRE(b.size() == 5);
        for (std::size_t k = 0; k < b.size(); ++k) {
            CHECK(b[k].onset == doctest::Approx(1.0 + 2.0 * k).epsilon(0.01));
            CHECK(b[k].size() == doctest::Approx(1.0).epsilon(0.02));
        }
        const auto st = burst_stats(b);
        CHECK(st.count == 5);
        CHECK(st.mean_period == doctest::Approx(2.0));
    }
    SUBCASE("empty trace") { CHECK(detect_bursts({}, {}, 0.0).empty()); }
}

TEST_CASE("kicked network bursts, and larger g_s_minus gives larger bursts") {
    auto run = [](double g_s) {
        NeuronParams p;
        p.g_s_minus = g_s;
        auto setup = isolated_hco_setup(p);
        setup.record_trace = false;
        Simulator sim(setup);
        sim.run_until(120.0);
        auto bursts = pair_bursts(sim.onsets()[0], sim.offsets()[0]);
        std::erase_if(bursts, [](const Burst& b) { return b.onset < 40.0; });
        return burst_stats(bursts);
    };
    const auto base = run(1.5);
    const auto wide = run(1.9);
    CHECK(base.count >= 10);
    CHECK(wide.mean_size > base.mean_size);
}

TEST_CASE("four-neuron anti-phase network keeps bursting after the kick") {
    SimulationSetup s;
    s.plant.i_mag = 0.0;
    s.sensors = false;
    s.record_trace = false;
    Simulator sim(s);
    sim.run_until(100.0);
    for (std::size_t k = 0; k < 4; ++k) CHECK(sim.onsets()[k].size() >= 10);
}

TEST_CASE("names round-trip") {
    for (auto id : {NeuronId::A1, NeuronId::B1, NeuronId::A2, NeuronId::B2}) CHECK(parse_neuron(neuron_name(id)) == id);
    CHECK_THROWS_AS(parse_neuron("C3"), std::invalid_argument);
    CHECK(parse_configuration("in_phase") == Configuration::InPhase);
    CHECK(parse_configuration(configuration_name(Configuration::AntiPhase)) == Configuration::AntiPhase);
}

TEST_CASE("parameter validation") {
    NeuronParams p;
    CHECK_NOTHROW(p.validate());
    p.tau_s = p.tau_f / 2;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.g_s_minus = -0.1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
