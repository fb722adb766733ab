#include <cmath>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "oscspec/config.hpp"
#include "oscspec/errors.hpp"
#include "oscspec/serialize.hpp"
#include "oscspec/specfun.hpp"

using namespace oscspec;

TEST_SUITE("serialize") {

TEST_CASE("potential round trip") {
    const Grid g(6.0, 0.01);
    const auto sampled = Potential::from_function([](double x) { return std::exp(-x * x) * std::cos(x); }, g);
    const auto back = potential_from_json(parse_json(to_json(sampled).dump()));
    CHECK(back.grid().size() == g.size());
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(back.values()[i] == sampled.values()[i]);
    CHECK_FALSE(back.hermite().has_value());

    const auto herm = Potential::from_hermite({0.5, -0.2}, g);
    const auto hb = potential_from_json(to_json(herm));
    REQUIRE(hb.hermite().has_value());
    CHECK(*hb.hermite() == *herm.hermite());
    CHECK(l2_distance(hb, herm) == 0.0);

    // hermite-only files need no samples
    const auto lean = parse_json(R"({"kind":"potential","xmax":6,"h":0.01,"values":[],"hermite":[0.5,-0.2]})");
    CHECK(l2_distance(potential_from_json(lean), herm) < 1e-14);
}

TEST_CASE("potential validation") {
    CHECK_THROWS_AS(potential_from_json(parse_json(R"({"kind":"potential","xmax":2,"h":0.5,"values":[1,2]})")),
                    input_error);
    CHECK_THROWS_AS(potential_from_json(parse_json(R"({"kind":"spectral_data"})")), input_error);
    CHECK_THROWS_AS(potential_from_json(parse_json(R"({"xmax":2,"values":[]})")), input_error);
    CHECK_THROWS_AS(potential_from_json(parse_json(R"({"schema_version":9,"xmax":2,"h":0.5,"values":[]})")),
                    input_error);
    CHECK_THROWS_AS(potential_from_json(parse_json("[1,2]")), input_error);
}

TEST_CASE("spectral data round trip") {
    auto d = make_dataset({3.1, 7.05, 11.02}, {nu0(0) + 0.1, nu0(1) - 0.05, nu0(2)}, 0.4);
    d.neumann = std::vector<double>{1.2, 5.1, 9.05};
    const auto back = dataset_from_json(parse_json(to_json(d).dump()));
    CHECK(back.N == 3);
    CHECK(back.sigma == d.sigma);
    CHECK(back.nu == d.nu);
    CHECK(back.q0 == d.q0);
    for (int n = 0; n < 3; ++n) {
        CHECK(back.r[n] == doctest::Approx(d.r[n]));
        CHECK(back.mu[n] == doctest::Approx(d.mu[n]));
    }
    REQUIRE(back.neumann.has_value());
    CHECK(*back.neumann == *d.neumann);

    // only r given: nu is rebuilt
    auto j = to_json(d);
    j.erase("nu");
    const auto from_r = dataset_from_json(j);
    for (int n = 0; n < 3; ++n) CHECK(from_r.nu[n] == doctest::Approx(d.nu[n]).epsilon(1e-14));

    auto wrong = to_json(d);
    wrong["N"] = 4;
    CHECK_THROWS_AS(dataset_from_json(wrong), input_error);
}

TEST_CASE("malformed JSON names the byte") {
    try {
        parse_json("{\"kind\": \"potential\", \"xmax\": 3,, }", "file.json");
        FAIL("no throw");
    } catch (const input_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("file.json") != std::string::npos);
        CHECK(msg.find("byte 33") != std::string::npos);
    }
    CHECK_THROWS_AS(read_json_file("/nonexistent/path.json"), input_error);
}

TEST_CASE("iteration log lines") {
    const std::vector<IterationRecord> log{{0, 0.5, 0.0}, {1, 1e-4, 0.2}};
    const auto text = iteration_log_lines(log);
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
    const auto first = parse_json(text.substr(0, text.find('\n')));
    CHECK(first["iter"] == 0);
    CHECK(first["residual"] == 0.5);
    CHECK(first.contains("step_norm"));
}

TEST_CASE("report objects") {
    const IdentityCheck c{"x", 0.1, 0.2};
    const auto j = to_json(c);
    CHECK(j["pass"] == true);
    ResidualReport r;
    r.first = 2;
    r.last = 5;
    r.residuals = {1, 2, 3, 4, 5, 6};
    CHECK(to_json(r)["kind"] == "residual_report");
}

TEST_CASE("run configuration") {
    RunConfig cfg;
    CHECK(cfg.tol("spectrum") == 1e-6);
    CHECK_THROWS_AS(cfg.tol("no-such"), input_error);
    merge_config(cfg, parse_json(R"({"N": 10, "h": 0.01, "tolerances": {"trace": 0.1}, "seed": 7})"));
    CHECK(cfg.N == 10);
    CHECK(cfg.h == 0.01);
    CHECK(cfg.tol("trace") == 0.1);
    CHECK(cfg.seed == 7);
    CHECK(cfg.effective_xmax() > std::sqrt(cfg.sigma_top()));
    CHECK_NOTHROW(cfg.validate());
    CHECK_THROWS_AS(merge_config(cfg, parse_json(R"({"bogus": 1})")), input_error);
    RunConfig typo;
    merge_config(typo, parse_json(R"({"tolerances": {"bogus": 1}})"));
    CHECK_THROWS_AS(typo.validate(), input_error);
    RunConfig bad;
    bad.N = 0;
    CHECK_THROWS_AS(bad.validate(), input_error);
    bad.N = 10;
    bad.xmax = 2.0;
    CHECK_THROWS_AS(bad.validate(), input_error);
    const auto echo = to_json(cfg);
    RunConfig again;
    merge_config(again, echo);
    CHECK(to_json(again) == echo);
}

}
