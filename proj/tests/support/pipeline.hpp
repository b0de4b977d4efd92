#pragma once

#include "insights/corpus.hpp"
#include "insights/index.hpp"

#include <filesystem>

namespace insights::test {

std::filesystem::path fixture_mirror();

/// Mirror fixture at `created_at` 2024-03-26T09:30:00Z, resolved with the
/// default thresholds.
struct FixturePipeline {
    corpus::Corpus corpus;
    index::RetrievalIndex index;
};

FixturePipeline fixture_pipeline(int meeting = 119);

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

} // namespace insights::test
