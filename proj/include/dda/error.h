// Copyright 2026 The DDA Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DDA_ERROR_H_
#define DDA_ERROR_H_

#include <stdexcept>
#include <string>

namespace dda {

// Broad failure class; the CLI maps these to exit codes.
enum class ErrorKind {
  kInvalidArgument,  // bad configuration or precondition
  kDataset,          // unreadable or malformed input data
  kRuntime,          // numerical failure during an experiment
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error InvalidArgument(const std::string& what) {
  return Error(ErrorKind::kInvalidArgument, what);
}
inline Error DatasetError(const std::string& what) {
  return Error(ErrorKind::kDataset, what);
}
inline Error RuntimeError(const std::string& what) {
  return Error(ErrorKind::kRuntime, what);
}

}  // namespace dda

#endif  // DDA_ERROR_H_
