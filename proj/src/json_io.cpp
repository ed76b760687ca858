#include "fri/json_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fri/errors.hpp"

namespace fri {

using nlohmann::json;

namespace {

json model_json(const GeneratorModel& model) {
    json m;
    if (model.is_spline()) {
        m["type"] = "spline";
        m["a"] = model.spline().a();
        m["b"] = model.spline().b();
        m["knots"] = model.spline().knots();
    } else {
        const auto& tri = model.triangulation();
        m["type"] = "triangulation";
        json nodes = json::array();
        for (const auto& p : tri.nodes()) nodes.push_back({p.x, p.y});
        m["nodes"] = std::move(nodes);
        json tris = json::array();
        for (const auto& t : tri.triangles()) tris.push_back({t.v[0], t.v[1], t.v[2]});
        m["triangles"] = std::move(tris);
        m["inner_nodes"] = tri.inner_nodes();
    }
    m["r0"] = model.support_radius();
    return m;
}

std::shared_ptr<const GeneratorModel> parse_model(const json& m) {
    if (!m.contains("type") || !m["type"].is_string())
        throw InputError("model JSON needs a \"type\" field");
    const std::string type = m["type"].get<std::string>();
    std::optional<double> r0;
    if (m.contains("r0")) r0 = m["r0"].get<double>();

    if (type == "spline") {
        auto knots = m.at("knots").get<std::vector<double>>();
        if (m.contains("a") && std::abs(m["a"].get<double>() - knots.front()) > 1e-12)
            throw InputError("spline JSON: \"a\" must equal the first knot");
        if (m.contains("b") && std::abs(m["b"].get<double>() - knots.back()) > 1e-12)
            throw InputError("spline JSON: \"b\" must equal the last knot");
        return std::make_shared<GeneratorModel>(SplineModel(std::move(knots)), r0);
    }
    if (type == "triangulation") {
        std::vector<DomainPoint> nodes;
        for (const auto& p : m.at("nodes"))
            nodes.push_back(DomainPoint::plane(p.at(0).get<double>(), p.at(1).get<double>()));
        std::vector<TriangulationModel::Triangle> tris;
        for (const auto& t : m.at("triangles"))
            tris.push_back({{t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()}});
        auto inner = m.at("inner_nodes").get<std::vector<Index>>();
        return std::make_shared<GeneratorModel>(
            TriangulationModel(std::move(nodes), std::move(tris), std::move(inner)), r0);
    }
    throw InputError("unknown model type \"" + type + "\"");
}

json parse_text(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw InputError("malformed JSON");
    return j;
}

}  // namespace

std::shared_ptr<const GeneratorModel> model_from_json(const std::string& text) {
    const json j = parse_text(text);
    if (!j.contains("model")) throw InputError("JSON needs a \"model\" object");
    return parse_model(j["model"]);
}

Signal signal_from_json(const std::string& text) {
    return signal_from_json(text, model_from_json(text));
}

Signal signal_from_json(const std::string& text, std::shared_ptr<const GeneratorModel> model) {
    const json j = parse_text(text);
    std::map<Index, double> coeffs;
    if (j.contains("coeffs")) {
        for (const auto& e : j["coeffs"]) {
            const Index lambda = e.at(0).get<Index>();
            if (coeffs.count(lambda)) throw InputError("duplicate coefficient index in JSON");
            coeffs[lambda] = e.at(1).get<double>();
        }
    }
    return Signal(std::move(model), std::move(coeffs));
}

std::string model_to_json(const GeneratorModel& model) {
    json j;
    j["model"] = model_json(model);
    return j.dump(2);
}

std::string signal_to_json(const Signal& f) {
    json j;
    j["model"] = model_json(f.model());
    json coeffs = json::array();
    for (const auto& [lambda, c] : f.coeffs()) coeffs.push_back({json(lambda), json(c)});
    j["coeffs"] = std::move(coeffs);
    return j.dump(2);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write file: " + path);
    out << content;
}

}  // namespace fri
