#pragma once

// Gzip-compressed CSV of step records, for debugging ABM runs.

#include <string>

#include "labornet/abm.hpp"
#include "labornet/csv.hpp"

namespace labornet::cli {

class TraceWriter {
 public:
  /// Writes the metadata and the header `t,kind,from,to,count`. Throws Error(Io).
  TraceWriter(const std::string& path, const Metadata& meta);
  ~TraceWriter();
  TraceWriter(const TraceWriter&) = delete;
  TraceWriter& operator=(const TraceWriter&) = delete;

  /// kind is one of separation, opening, rescue (from = to = occupation),
  /// application, hire.
  void write(const StepRecord& rec);
  void close();

 private:
  void put(const std::string& s);

  void* file_ = nullptr;
  std::string path_;
};

}  // namespace labornet::cli
