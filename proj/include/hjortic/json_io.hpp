#ifndef HJORTIC_JSON_IO_HPP
#define HJORTIC_JSON_IO_HPP

#include <cstdlib>
#include <string>
#include <vector>

#include <json.hpp>

#include "hjortic/argauss.hpp"
#include "hjortic/confid.hpp"
#include "hjortic/copula.hpp"
#include "hjortic/modelsel.hpp"

namespace hjortic {

/// Round to 12 significant digits so repeated runs serialize byte-identically.
inline double sig12(double x) {
    if (!std::isfinite(x)) return x;
    return std::strtod(detail::format_sig12(x).c_str(), nullptr);
}

inline nlohmann::json to_json(const ArxSpec& s) {
    nlohmann::json j;
    j["response"] = s.response;
    j["regressors"] = nlohmann::json::array();
    for (const auto& r : s.regressors)
        j["regressors"].push_back({{"name", r.name}, {"lag", r.lag}});
    j["include_intercept"] = s.include_intercept;
    j["include_linear_trend"] = s.include_linear_trend;
    j["ar_order"] = s.ar_order;
    return j;
}

inline ArxSpec spec_from_json(const nlohmann::json& j) {
    ArxSpec s;
    s.response = j.at("response").get<std::string>();
    for (const auto& r : j.at("regressors"))
        s.regressors.push_back({r.at("name").get<std::string>(), r.at("lag").get<int>()});
    s.include_intercept = j.at("include_intercept").get<bool>();
    s.include_linear_trend = j.at("include_linear_trend").get<bool>();
    s.ar_order = j.at("ar_order").get<int>();
    return s;
}

inline nlohmann::json to_json(const ArxFit& f) {
    nlohmann::json j;
    j["spec"] = to_json(f.spec);
    j["beta"] = nlohmann::json::array();
    const auto names = f.spec.beta_names();
    for (std::size_t i = 0; i < f.beta.size(); ++i)
        j["beta"].push_back({{"name", names[i]}, {"value", sig12(f.beta[i])}});
    j["rho"] = nlohmann::json::array();
    for (double r : f.rho) j["rho"].push_back(sig12(r));
    j["sigma"] = sig12(f.sigma);
    j["loglik_max"] = sig12(f.loglik_max);
    j["n_effective"] = f.n_effective;
    j["vcov"] = nlohmann::json::array();  // row-major
    for (int i = 0; i < f.vcov.rows(); ++i)
        for (int c = 0; c < f.vcov.cols(); ++c) j["vcov"].push_back(sig12(f.vcov(i, c)));
    return j;
}

inline ArxFit fit_from_json(const nlohmann::json& j) {
    ArxFit f;
    f.spec = spec_from_json(j.at("spec"));
    for (const auto& b : j.at("beta")) f.beta.push_back(b.at("value").get<double>());
    for (const auto& r : j.at("rho")) f.rho.push_back(r.get<double>());
    f.sigma = j.at("sigma").get<double>();
    f.loglik_max = j.at("loglik_max").get<double>();
    f.n_effective = j.at("n_effective").get<int>();
    const auto& v = j.at("vcov");
    const int np = f.spec.n_params();
    if (static_cast<int>(v.size()) == np * np) {
        f.vcov.resize(np, np);
        for (int i = 0; i < np; ++i)
            for (int c = 0; c < np; ++c) f.vcov(i, c) = v[i * np + c].get<double>();
    }
    return f;
}

inline nlohmann::json to_json(const ConfidenceDistribution& cd) {
    nlohmann::json j;
    j["focus_label"] = cd.focus_label;
    j["family"] = cd.is_grid ? "grid" : "normal";
    j["center"] = sig12(cd.center);
    j["spread"] = sig12(cd.spread);
    if (cd.is_grid) {
        j["grid_theta"] = cd.grid_theta;
        j["grid_c"] = cd.grid_c;
    }
    return j;
}

inline ConfidenceDistribution cd_from_json(const nlohmann::json& j) {
    ConfidenceDistribution cd;
    cd.focus_label = j.at("focus_label").get<std::string>();
    cd.center = j.at("center").get<double>();
    cd.spread = j.at("spread").get<double>();
    if (j.at("family").get<std::string>() == "grid") {
        cd.is_grid = true;
        cd.grid_theta = j.at("grid_theta").get<std::vector<double>>();
        cd.grid_c = j.at("grid_c").get<std::vector<double>>();
    }
    return cd;
}

inline nlohmann::json to_json(const CopulaModel& m) {
    return {{"a1", sig12(m.a1)}, {"b1", sig12(m.b1)}, {"a2", sig12(m.a2)},
            {"b2", sig12(m.b2)}, {"rho", sig12(m.rho)}};
}

inline CopulaModel copula_from_json(const nlohmann::json& j) {
    CopulaModel m;
    m.a1 = j.at("a1").get<double>();
    m.b1 = j.at("b1").get<double>();
    m.a2 = j.at("a2").get<double>();
    m.b2 = j.at("b2").get<double>();
    m.rho = j.at("rho").get<double>();
    return m;
}

inline nlohmann::json to_json(const FicReport& rep) {
    nlohmann::json j;
    j["focus"] = rep.focus_label;
    j["wide"] = rep.wide_label;
    j["candidates"] = nlohmann::json::array();
    for (const auto& e : rep.entries) {
        j["candidates"].push_back({{"model", e.label},
                                   {"focus_estimate", sig12(e.focus_estimate)},
                                   {"variance", sig12(e.variance)},
                                   {"sq_bias", sig12(e.sq_bias)},
                                   {"fic_score", sig12(e.fic_score)}});
    }
    return j;
}

}  // namespace hjortic

#endif  // HJORTIC_JSON_IO_HPP
