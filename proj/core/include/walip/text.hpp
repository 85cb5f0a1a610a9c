#pragma once

#include <string>
#include <string_view>

namespace walip::text {

/// NFC-normalize a UTF-8 string. Throws InvalidArgument on invalid UTF-8.
std::string nfc(std::string_view utf8);

/// Full Unicode case folding, returned as code points.
std::u32string fold_case(std::string_view utf8);

std::u32string to_code_points(std::string_view utf8);
std::string to_utf8(std::u32string_view code_points);

}  // namespace walip::text
