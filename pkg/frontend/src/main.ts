import { initApp } from './app.js';

initApp(document, document.body.dataset.baseUrl ?? '');
