#include "trace.hpp"

#include <sstream>

#include <zlib.h>

#include "labornet/error.hpp"

namespace labornet::cli {

TraceWriter::TraceWriter(const std::string& path, const Metadata& meta) : path_(path) {
  file_ = gzopen(path.c_str(), "wb");
  if (!file_) throw Error(ErrorKind::Io, "cannot open trace file " + path);
  std::ostringstream head;
  meta.write(head);
  head << "t,kind,from,to,count\n";
  put(head.str());
}

TraceWriter::~TraceWriter() {
  if (file_) gzclose(static_cast<gzFile>(file_));
}

void TraceWriter::put(const std::string& s) {
  if (s.empty()) return;
  const int n = gzwrite(static_cast<gzFile>(file_), s.data(), static_cast<unsigned>(s.size()));
  if (n != static_cast<int>(s.size())) throw Error(ErrorKind::Io, "error writing " + path_);
}

void TraceWriter::write(const StepRecord& rec) {
  std::ostringstream out;
  auto per_occupation = [&](const char* kind, const std::vector<std::int64_t>& counts) {
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (counts[i] != 0) out << rec.t << ',' << kind << ',' << i << ',' << i << ',' << counts[i] << '\n';
    }
  };
  per_occupation("rescue", rec.rescued);
  per_occupation("separation", rec.separations);
  per_occupation("opening", rec.openings);
  for (const auto& f : rec.applications) {
    out << rec.t << ",application," << f.from << ',' << f.to << ',' << f.count << '\n';
  }
  for (const auto& f : rec.hires) {
    out << rec.t << ",hire," << f.from << ',' << f.to << ',' << f.count << '\n';
  }
  put(out.str());
}

void TraceWriter::close() {
  if (!file_) return;
  const int rc = gzclose(static_cast<gzFile>(file_));
  file_ = nullptr;
  if (rc != Z_OK) throw Error(ErrorKind::Io, "error closing " + path_);
}

}  // namespace labornet::cli
