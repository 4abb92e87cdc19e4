#pragma once

#include <string>
#include <string_view>

namespace labornet::cli {

/// Git blob id of `content`: hex SHA-1 of "blob <size>\0" followed by the bytes.
std::string git_blob_sha1(std::string_view content);

}  // namespace labornet::cli
