#include "insights/error.hpp"
#include "insights/resolve.hpp"

#include "insights/text.hpp"

#include <algorithm>

namespace insights::resolve {

std::string_view to_string(EntityKind kind) noexcept
{
    return kind == EntityKind::person ? "person" : "affiliation";
}

std::string unaffiliated_id()
{
    return "affiliation:" + std::string(kUnaffiliatedLabel);
}

namespace {

struct FormStats {
    std::string normalized;
    std::uint64_t frequency = 0;
    std::map<std::string, std::uint64_t> originals;

    /// Most frequent original, ties lexicographically smallest.
    [[nodiscard]] std::string preferred_original() const
    {
        const auto best = std::max_element(originals.begin(), originals.end(), [](const auto& a, const auto& b) {
            return a.second < b.second;
        });
        // max_element keeps the first of equal maxima; the map is sorted, so
        // that is the lexicographically smallest.
        return best->first;
    }
};

bool is_reserved_affiliation(const std::string& normalized)
{
    return normalized.empty() || normalized == kUnaffiliatedLabel;
}

MatchScore compare(EntityKind kind, std::string_view a, std::string_view b)
{
    return kind == EntityKind::person ? token_sort_ratio(a, b) : token_set_ratio(a, b);
}

} // namespace

std::vector<CanonicalEntity> cluster(const std::vector<NormalizedString>& rows, EntityKind kind,
                                     double threshold)
{
    if (!(threshold > 0.0 && threshold <= 100.0)) {
        throw InvalidThreshold("threshold must be in (0, 100], got " + std::to_string(threshold));
    }
    const Score min_score = Score::from_value(threshold);

    std::map<std::string, FormStats> by_form;
    for (const auto& row : rows) {
        auto& stats = by_form[row.normalized];
        stats.normalized = row.normalized;
        ++stats.frequency;
        ++stats.originals[row.original];
    }

    std::vector<const FormStats*> order;
    std::vector<const FormStats*> reserved_forms;
    for (const auto& [form, stats] : by_form) {
        if (kind == EntityKind::affiliation && is_reserved_affiliation(form)) {
            reserved_forms.push_back(&stats);
            continue;
        }
        order.push_back(&stats);
    }
    std::stable_sort(order.begin(), order.end(), [](const FormStats* a, const FormStats* b) {
        if (a->frequency != b->frequency) return a->frequency > b->frequency;
        return a->normalized < b->normalized;
    });

    const std::string prefix = std::string(to_string(kind)) + ":";
    std::vector<CanonicalEntity> entities;
    std::vector<std::string> label_forms;
    for (const FormStats* form : order) {
        std::size_t target = entities.size();
        for (std::size_t c = 0; c < entities.size(); ++c) {
            if (compare(kind, form->normalized, label_forms[c]).score >= min_score) {
                target = c;
                break;
            }
        }
        if (target == entities.size()) {
            CanonicalEntity e;
            e.id = prefix + form->normalized;
            e.kind = kind;
            e.label = form->preferred_original();
            entities.push_back(std::move(e));
            label_forms.push_back(form->normalized);
        }
        auto& e = entities[target];
        e.normalized_forms.insert(form->normalized);
        e.frequency += form->frequency;
        for (const auto& [original, count] : form->originals) e.surface_forms.insert(original);
    }

    if (!reserved_forms.empty()) {
        CanonicalEntity e;
        e.id = unaffiliated_id();
        e.kind = EntityKind::affiliation;
        e.label = std::string(kUnaffiliatedLabel);
        for (const FormStats* form : reserved_forms) {
            e.normalized_forms.insert(form->normalized);
            e.frequency += form->frequency;
            for (const auto& [original, count] : form->originals) {
                if (!text::trim(original).empty()) e.surface_forms.insert(original);
            }
        }
        entities.push_back(std::move(e));
    }
    return entities;
}

} // namespace insights::resolve
