// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace sembert {

// Base class for every error raised by the library. Subclasses name the
// failure category so callers (and tests) can dispatch on it.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SEMBERT_DEFINE_ERROR(Name)          \
  class Name : public Error {               \
   public:                                  \
    using Error::Error;                     \
  }

SEMBERT_DEFINE_ERROR(DimensionError);
SEMBERT_DEFINE_ERROR(IndexError);
SEMBERT_DEFINE_ERROR(PreconditionError);
SEMBERT_DEFINE_ERROR(RangeError);
SEMBERT_DEFINE_ERROR(EmptySentenceError);
SEMBERT_DEFINE_ERROR(AlignmentError);
SEMBERT_DEFINE_ERROR(VocabError);
SEMBERT_DEFINE_ERROR(StructureError);
SEMBERT_DEFINE_ERROR(LengthError);
SEMBERT_DEFINE_ERROR(DecodeError);
SEMBERT_DEFINE_ERROR(DegenerateInputError);
SEMBERT_DEFINE_ERROR(ParseError);
SEMBERT_DEFINE_ERROR(ValidationError);
SEMBERT_DEFINE_ERROR(DivergenceError);

#undef SEMBERT_DEFINE_ERROR

}  // namespace sembert
