#include "semithermo/spec_io.hpp"
#include "semithermo/errors.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <fstream>
#include <sstream>

namespace semithermo {

namespace {

using nlohmann::json;

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte)
{
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

Coeffs read_coeffs(const json& arr, const std::string& where)
{
    if (!arr.is_array() || arr.empty()) {
        throw ParseError(fmt::format("{} must be a non-empty array of coefficients", where));
    }
    Coeffs out;
    for (std::size_t k = 0; k < arr.size(); ++k) {
        const json& c = arr[k];
        if (c.is_number()) {
            out.emplace_back(c.get<double>(), 0.0);
        } else if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number()) {
            out.emplace_back(c[0].get<double>(), c[1].get<double>());
        } else {
            throw ParseError(fmt::format("{}[{}] must be a number or an [re, im] pair", where, k));
        }
    }
    return out;
}

} // namespace

SemigroupSpec parse_spec_text(const std::string& text, const std::string& origin)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ParseError(fmt::format("{}: line {}, column {}: malformed JSON", origin, line, col));
    }
    if (!doc.is_object()) {
        throw ParseError(fmt::format("{}: top level must be an object", origin));
    }
    std::string name;
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) {
            throw ParseError(fmt::format("{}: \"name\" must be a string", origin));
        }
        name = doc["name"].get<std::string>();
    }
    if (!doc.contains("generators") || !doc["generators"].is_array()) {
        throw ParseError(fmt::format("{}: missing \"generators\" array", origin));
    }
    std::vector<RationalMap> gens;
    const json& list = doc["generators"];
    for (std::size_t i = 0; i < list.size(); ++i) {
        const json& g = list[i];
        const std::string where = fmt::format("{}: generators[{}]", origin, i);
        if (!g.is_object() || !g.contains("num")) {
            throw ParseError(where + " must be an object with \"num\"");
        }
        Coeffs num = read_coeffs(g["num"], where + ".num");
        Coeffs den = g.contains("den") ? read_coeffs(g["den"], where + ".den") : Coeffs{cplx(1.0, 0.0)};
        try {
            gens.emplace_back(std::move(num), std::move(den));
        } catch (const ValidationError& e) {
            const std::string msg = e.what();
            throw ValidationError(fmt::format("{}: {}", where, msg.substr(msg.find(": ") + 2)));
        }
    }
    return make_semigroup(std::move(gens), name);
}

SemigroupSpec parse_spec(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError(fmt::format("cannot open spec file '{}'", path));
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_spec_text(buf.str(), path);
}

std::string spec_to_json(const SemigroupSpec& spec)
{
    auto coeffs = [](const Coeffs& c) {
        std::string s = "[";
        for (std::size_t k = 0; k < c.size(); ++k) {
            s += fmt::format("{}[{:.17g}, {:.17g}]", k ? ", " : "", c[k].real(), c[k].imag());
        }
        return s + "]";
    };
    std::string out = fmt::format("{{\n  \"name\": \"{}\",\n  \"generators\": [\n", spec.name);
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const auto& g = spec.generators[i];
        out += fmt::format("    {{\"num\": {}", coeffs(g.numerator()));
        if (g.denominator().size() != 1 || g.denominator()[0] != cplx(1.0, 0.0)) {
            out += fmt::format(", \"den\": {}", coeffs(g.denominator()));
        }
        out += i + 1 < spec.size() ? "},\n" : "}\n";
    }
    return out + "  ]\n}\n";
}

} // namespace semithermo
