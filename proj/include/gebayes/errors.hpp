#pragma once

#include <stdexcept>
#include <string>

namespace gebayes {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define GEBAYES_ERROR(Name)                 \
  struct Name : Error {                     \
    using Error::Error;                     \
  }

// grammar
GEBAYES_ERROR(SyntaxError);
GEBAYES_ERROR(UndefinedSymbol);
GEBAYES_ERROR(EmptyProduction);
GEBAYES_ERROR(MappingIncomplete);

// expr / dataset
GEBAYES_ERROR(UnknownColumn);
GEBAYES_ERROR(TypeMismatch);
GEBAYES_ERROR(ZeroVariance);
GEBAYES_ERROR(MissingColumn);
GEBAYES_ERROR(NonNumericCell);

// evolution
GEBAYES_ERROR(AllInvalid);

// rulebase
GEBAYES_ERROR(UnrecognizedShape);
GEBAYES_ERROR(EmptyGrid);

// likelihoods
GEBAYES_ERROR(OutOfDomain);

// bayes
GEBAYES_ERROR(DimensionMismatch);
GEBAYES_ERROR(UnsupportedVariantModelPair);
GEBAYES_ERROR(InvalidInit);
GEBAYES_ERROR(NonFiniteTarget);
GEBAYES_ERROR(EmptyTrace);

// data
GEBAYES_ERROR(UnstableConfig);
GEBAYES_ERROR(SingleClass);

// metrics
GEBAYES_ERROR(LengthMismatch);
GEBAYES_ERROR(SingleDraw);
GEBAYES_ERROR(NoPositives);

// cli / config
GEBAYES_ERROR(ConfigError);

#undef GEBAYES_ERROR

}  // namespace gebayes
