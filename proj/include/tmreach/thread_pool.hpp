#ifndef TMREACH_THREAD_POOL_HPP
#define TMREACH_THREAD_POOL_HPP

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace tmreach
{

// Fixed-size worker pool for index-parallel loops. Every index is handled
// exactly once and writes only its own output slot, so results do not
// depend on the worker count or on scheduling.
class ThreadPool
{
public:
    // threads == 0 picks the hardware concurrency.
    explicit ThreadPool(unsigned threads = 1);
    ~ThreadPool();

    ThreadPool(const ThreadPool &) = delete;
    ThreadPool &operator=(const ThreadPool &) = delete;

    unsigned size() const noexcept { return unsigned(workers_.size()) + 1; }

    // Runs body(i) for i in [0, n) and returns when all calls are done. The
    // exception thrown for the lowest failing index is rethrown.
    void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body);

private:
    void worker_loop();
    void drain();

    std::vector<std::thread> workers_;
    std::mutex mutex_;
    std::condition_variable wake_;
    std::condition_variable done_;
    std::mutex run_mutex_;

    const std::function<void(std::size_t)> *body_ = nullptr;
    std::size_t n_ = 0;
    std::size_t next_ = 0;
    std::size_t finished_ = 0;
    std::size_t generation_ = 0;
    bool stop_ = false;

    std::size_t error_index_ = 0;
    std::exception_ptr error_;
};

} // namespace tmreach

#endif
