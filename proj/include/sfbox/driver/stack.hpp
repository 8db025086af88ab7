#pragma once

#include <cstddef>
#include <exception>
#include <optional>
#include <pthread.h>
#include <stdexcept>
#include <type_traits>

namespace sfbox::driver {

// Runs f on a thread with a large stack: the checker and both evaluators recurse on the
// structure of terms and of the evaluation.
template <class F>
auto with_big_stack(F&& f, std::size_t bytes = std::size_t{1} << 30) -> decltype(f()) {
  using R = decltype(f());
  struct Job {
    std::remove_reference_t<F>* f;
    std::optional<R> result;
    std::exception_ptr error;
  } job{&f, std::nullopt, nullptr};
  auto run = [](void* p) -> void* {
    auto* j = static_cast<Job*>(p);
    try {
      j->result.emplace((*j->f)());
    } catch (...) {
      j->error = std::current_exception();
    }
    return nullptr;
  };
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, bytes);
  pthread_t t;
  if (pthread_create(&t, &attr, run, &job) != 0) {
    pthread_attr_destroy(&attr);
    return f();
  }
  pthread_join(t, nullptr);
  pthread_attr_destroy(&attr);
  if (job.error) std::rethrow_exception(job.error);
  return std::move(*job.result);
}

}  // namespace sfbox::driver
