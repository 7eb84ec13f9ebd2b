#ifndef METACOMP_COMPONENT_HPP
#define METACOMP_COMPONENT_HPP

#include <exception>
#include <memory>
#include <utility>
#include <variant>

#include "metacomp/descriptor.hpp"
#include "metacomp/solution.hpp"
#include "metacomp/step.hpp"

namespace metacomp {

/// A Step bundled with its descriptor. Immutable after construction; all
/// per-run state lives in the threaded Environment.
template <class In, class Out>
class Component {
 public:
  using input_type = In;
  using output_type = Out;

  Component(ComponentDescriptor descriptor, Step<In, Out> step)
      : descriptor_(std::make_shared<const ComponentDescriptor>(std::move(descriptor))), step_(std::move(step)) {}

  Threaded<Out> operator()(const In& x, Environment env) const {
    try {
      return step_(x, std::move(env));
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw ComponentError(descriptor_->name, e.what());
    }
  }

  const ComponentDescriptor& descriptor() const noexcept { return *descriptor_; }
  const Step<In, Out>& step() const noexcept { return step_; }

 private:
  std::shared_ptr<const ComponentDescriptor> descriptor_;
  Step<In, Out> step_;
};

template <class Sol>
struct Candidates {
  Sol incumbent;
  Sol incoming;
};

template <class Sol = Solution>
using PerturbC = Component<Sol, Sol>;
template <class Sol = Solution>
using AcceptC = Component<Candidates<Sol>, Sol>;
template <class Sol = Solution>
using TerminateC = Component<Sol, bool>;
template <class Sol = Solution>
using EvaluateC = Component<Sol, double>;
using InitializerC = Component<std::monostate, std::monostate>;

using Perturb = PerturbC<>;
using Accept = AcceptC<>;
using Terminate = TerminateC<>;
using Evaluate = EvaluateC<>;

template <class In, class Out>
const ComponentDescriptor& descriptor_of(const Component<In, Out>& c) {
  return c.descriptor();
}

}  // namespace metacomp

#endif  // METACOMP_COMPONENT_HPP
