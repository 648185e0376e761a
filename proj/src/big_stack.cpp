#include "mfl/big_stack.hpp"

#include <pthread.h>

#include <cstring>
#include <stdexcept>
#include <string>

namespace mfl {
namespace {

struct Job {
  const std::function<void()>* body;
  std::exception_ptr error;
};

void* trampoline(void* arg) {
  auto* job = static_cast<Job*>(arg);
  try {
    (*job->body)();
  } catch (...) {
    job->error = std::current_exception();
  }
  return nullptr;
}

}  // namespace

void run_on_big_stack(const std::function<void()>& body, std::size_t stack_bytes) {
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, stack_bytes);
  Job job{&body, nullptr};
  pthread_t tid;
  const int rc = pthread_create(&tid, &attr, trampoline, &job);
  pthread_attr_destroy(&attr);
  if (rc != 0) throw std::runtime_error(std::string("pthread_create: ") + std::strerror(rc));
  pthread_join(tid, nullptr);
  if (job.error) std::rethrow_exception(job.error);
}

}  // namespace mfl
