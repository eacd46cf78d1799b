#ifndef OSCAIL_CLASSIFIER_HPP
#define OSCAIL_CLASSIFIER_HPP

#include <memory>
#include <ostream>
#include <span>
#include <string>

#include "oscail/dataset.hpp"
#include "oscail/preprocess.hpp"

namespace oscail {

// Every algorithm implements this; models are immutable once trained and
// safe to use for prediction from any number of workers. predict() takes a
// raw feature vector and applies the model's stored normalization itself.
class Classifier {
public:
    virtual ~Classifier() = default;

    virtual const char* algorithm_id() const = 0;
    virtual std::size_t arity() const = 0;
    virtual Label predict(std::span<const double> x) const = 0;

    // Hyperparameters, normalization and learned state as the key-value
    // body of a .oscal file. model_io.cpp owns the framing.
    virtual void write_state(std::ostream& out) const = 0;

    virtual std::unique_ptr<Classifier> clone() const = 0;
};

} // namespace oscail

#endif
