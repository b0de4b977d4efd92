#include "insights/resolve.hpp"

#include "insights/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <stdexcept>

namespace insights::resolve {

namespace {

const icu::Normalizer2& nfkc_casefold()
{
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* n = icu::Normalizer2::getNFKCCasefoldInstance(status);
    if (U_FAILURE(status) || n == nullptr) {
        throw std::runtime_error(std::string("ICU NFKC_Casefold unavailable: ") + u_errorName(status));
    }
    return *n;
}

bool is_separator(UChar32 c)
{
    return u_ispunct(c) || u_isUWhiteSpace(c) || u_iscntrl(c);
}

std::string normalize_once(std::string_view s)
{
    const icu::UnicodeString input =
        icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
    UErrorCode status = U_ZERO_ERROR;
    const icu::UnicodeString folded = nfkc_casefold().normalize(input, status);
    if (U_FAILURE(status)) throw std::runtime_error(std::string("ICU normalize failed: ") + u_errorName(status));

    icu::UnicodeString out;
    bool pending_space = false;
    for (int32_t i = 0; i < folded.length();) {
        const UChar32 c = folded.char32At(i);
        i += U16_LENGTH(c);
        if (is_separator(c)) {
            pending_space = !out.isEmpty();
            continue;
        }
        if (pending_space) {
            out.append(static_cast<UChar32>(' '));
            pending_space = false;
        }
        out.append(c);
    }
    std::string utf8;
    out.toUTF8String(utf8);
    return utf8;
}

} // namespace

NormalizedString normalize(std::string_view s)
{
    // Dropping punctuation can leave a sequence that folds further, so iterate
    // to a fixed point. In practice this converges after one extra pass.
    std::string current = normalize_once(s);
    for (int pass = 0; pass < 8; ++pass) {
        std::string next = normalize_once(current);
        if (next == current) break;
        current = std::move(next);
    }
    return NormalizedString{text::sanitize_utf8(s), std::move(current)};
}

} // namespace insights::resolve
