#pragma once

#include <stdexcept>
#include <string>

namespace lstmopt {

// Process exit codes shared by the command-line tool.
enum class ErrorKind {
  Usage = 2,
  Io = 3,
  Format = 4,
  Resource = 5,
  Data = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

#define LSTMOPT_DEFINE_ERROR(Name, Kind)                                   \
  class Name : public Error {                                             \
   public:                                                                \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  }

LSTMOPT_DEFINE_ERROR(UsageError, Usage);
LSTMOPT_DEFINE_ERROR(IoError, Io);
LSTMOPT_DEFINE_ERROR(FormatError, Format);
LSTMOPT_DEFINE_ERROR(ResourceError, Resource);
LSTMOPT_DEFINE_ERROR(DimensionError, Data);
LSTMOPT_DEFINE_ERROR(GenerationError, Data);
LSTMOPT_DEFINE_ERROR(DatasetError, Data);
LSTMOPT_DEFINE_ERROR(ModelError, Data);
LSTMOPT_DEFINE_ERROR(DivergenceError, Data);
LSTMOPT_DEFINE_ERROR(ValidationError, Data);
LSTMOPT_DEFINE_ERROR(PartitionError, Data);
LSTMOPT_DEFINE_ERROR(UndefinedGapError, Data);

#undef LSTMOPT_DEFINE_ERROR

}  // namespace lstmopt
