#include "insights/llm.hpp"

#include "embedded_assets.hpp"
#include "insights/error.hpp"
#include "insights/text.hpp"

#include <nlohmann/json.hpp>

namespace insights::llm {

using nlohmann::json;

std::string_view to_string(ModelCategory c) noexcept
{
    return c == ModelCategory::Large ? "Large" : "Small";
}

std::string_view to_string(Locality l) noexcept
{
    return l == Locality::api ? "api" : "local";
}

ModelCategory classify_model(double parameters_billions, double boundary_billions)
{
    if (!(parameters_billions > 0.0)) throw InvalidArgument("parameter count must be positive");
    return parameters_billions >= boundary_billions ? ModelCategory::Large : ModelCategory::Small;
}

const ModelSpec* ModelRegistry::find(std::string_view name) const
{
    for (const auto& m : models) {
        if (m.name == name) return &m;
    }
    return nullptr;
}

namespace {

ModelCategory parse_category(const std::string& s)
{
    if (s == "Large") return ModelCategory::Large;
    if (s == "Small") return ModelCategory::Small;
    throw SchemaError("unknown model category `" + s + "`");
}

Locality parse_locality(const std::string& s)
{
    if (s == "local") return Locality::local;
    if (s == "api") return Locality::api;
    throw SchemaError("unknown model locality `" + s + "`");
}

} // namespace

ModelRegistry parse_registry(std::string_view json_text)
{
    ModelRegistry reg;
    try {
        const json doc = json::parse(json_text);
        std::size_t small_ctx = kDefaultSmallContextTokens;
        std::size_t large_ctx = kDefaultLargeContextTokens;
        if (const auto it = doc.find("context_defaults"); it != doc.end()) {
            small_ctx = it->value("Small", small_ctx);
            large_ctx = it->value("Large", large_ctx);
        }
        for (const auto& m : doc.at("models")) {
            ModelSpec spec;
            spec.name = m.at("name").get<std::string>();
            spec.parameters_billions = m.at("parameters_billions").get<double>();
            spec.size_gb = m.at("size_gb").get<double>();
            spec.category = parse_category(m.at("category").get<std::string>());
            spec.locality = parse_locality(m.value("locality", std::string("local")));
            if (spec.parameters_billions <= 0.0 || spec.size_gb <= 0.0) {
                throw SchemaError("model `" + spec.name + "`: sizes must be positive");
            }
            if (classify_model(spec.parameters_billions) != spec.category) {
                throw SchemaError("model `" + spec.name + "`: category " + std::string(to_string(spec.category)) +
                                  " contradicts its parameter count");
            }
            spec.context_tokens = m.value("context_tokens",
                                          spec.category == ModelCategory::Large ? large_ctx : small_ctx);
            if (spec.context_tokens == 0) throw SchemaError("model `" + spec.name + "`: zero context");
            reg.models.push_back(std::move(spec));
        }
    } catch (const json::exception& e) {
        throw SchemaError(std::string("malformed model registry: ") + e.what());
    }
    return reg;
}

ModelRegistry load_registry(const std::filesystem::path& path)
{
    return parse_registry(text::read_file(path.string()));
}

const ModelRegistry& default_registry()
{
    static const ModelRegistry registry = parse_registry(assets::kModelsJson);
    return registry;
}

} // namespace insights::llm
